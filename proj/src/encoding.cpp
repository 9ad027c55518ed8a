#include "certsynt/encoding.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace certsynt {

Bounds Bounds::uniform(int num_processes, int strategy, int cert) {
  Bounds b;
  b.strategy_size.assign(static_cast<size_t>(num_processes), strategy);
  b.cert_size.assign(static_cast<size_t>(num_processes), cert);
  return b;
}

namespace varname {

std::string trans_t(const std::string& proc, int t, uint32_t cube, int t2) {
  return "trans_t(" + proc + "," + std::to_string(t) + "," + std::to_string(cube) + "," +
         std::to_string(t2) + ")";
}
std::string out_t(const std::string& proc, int t, int cube_or_minus1, const std::string& v) {
  return "out_t(" + proc + "," + std::to_string(t) + "," + std::to_string(cube_or_minus1) + "," +
         v + ")";
}
std::string trans_g(const std::string& proc, int u, uint32_t cube, int u2) {
  return "trans_g(" + proc + "," + std::to_string(u) + "," + std::to_string(cube) + "," +
         std::to_string(u2) + ")";
}
std::string out_g(const std::string& proc, int u, int cube_or_minus1, const std::string& v) {
  return "out_g(" + proc + "," + std::to_string(u) + "," + std::to_string(cube_or_minus1) + "," +
         v + ")";
}
std::string sim_tg(const std::string& proc, int t, int u) {
  return "sim_tg(" + proc + "," + std::to_string(t) + "," + std::to_string(u) + ")";
}
std::string sim_gt(const std::string& k, const std::string& j, int u, int t) {
  return "sim_gt(" + k + "," + j + "," + std::to_string(u) + "," + std::to_string(t) + ")";
}
std::string reach(const std::string& proc, int t, int q) {
  return "reach(" + proc + "," + std::to_string(t) + "," + std::to_string(q) + ")";
}
std::string bound_bit(const std::string& proc, int t, int q, int bit) {
  return "bound(" + proc + "," + std::to_string(t) + "," + std::to_string(q) + "," +
         std::to_string(bit) + ")";
}

}  // namespace varname

struct Encoder::Impl {
  Architecture arch;
  std::vector<std::set<int>> relevant;
  GuaranteeAlphabet ga;
  std::vector<UniversalCoBuchi> ucas;
  Bounds bounds;
  SemanticsMode mode;
  EncoderLimits limits;
  CnfInstance cnf;
  EncodingLayout layout;

  std::vector<std::map<std::string, int>> input_pos;  // per process: var -> cube bit
  std::vector<std::set<std::string>> own_out;         // per process: O_j as a set

  int num_procs() const { return static_cast<int>(arch.processes.size()); }
  const std::string& name(int j) const { return arch.processes[static_cast<size_t>(j)].name; }
  int n_t(int j) const { return bounds.strategy_size[static_cast<size_t>(j)]; }
  int n_g(int j) const { return bounds.cert_size[static_cast<size_t>(j)]; }
  uint32_t cubes(int j) const {
    return 1u << arch.processes[static_cast<size_t>(j)].inputs.size();
  }
  bool mealy() const { return mode == SemanticsMode::Mealy; }
  int cube_tag(uint32_t i) const { return mealy() ? static_cast<int>(i) : -1; }

  int var(const std::string& n) {
    const int v = cnf.registry.lookup_or_add(n);
    if (v > cnf.num_vars) cnf.num_vars = v;
    return v;
  }

  void emit(std::vector<int> lits) {
    if (static_cast<long long>(cnf.clauses.size()) >= limits.max_clauses)
      throw ResourceError("encoding exceeded the clause cap");
    cnf.add_clause(std::move(lits));
  }

  int v_trans_t(int j, int t, uint32_t i, int t2) {
    return var(varname::trans_t(name(j), t, i, t2));
  }
  int v_out_t(int j, int t, uint32_t i, const std::string& v) {
    return var(varname::out_t(name(j), t, cube_tag(i), v));
  }
  int v_trans_g(int j, int u, uint32_t i, int u2) {
    return var(varname::trans_g(name(j), u, i, u2));
  }
  int v_out_g(int j, int u, uint32_t i, const std::string& v) {
    return var(varname::out_g(name(j), u, cube_tag(i), v));
  }
  int v_sim_tg(int j, int t, int u) { return var(varname::sim_tg(name(j), t, u)); }
  int v_sim_gt(int k, int j, int u, int t) {
    return var(varname::sim_gt(name(k), name(j), u, t));
  }
  int v_reach(int j, int t, int q) { return var(varname::reach(name(j), t, q)); }
  int v_bound_bit(int j, int t, int q, int b) {
    return var(varname::bound_bit(name(j), t, q, b));
  }

  /// Literals whose conjunction states that input cube i matches the
  /// associated-output predictions of strategy state t.
  std::vector<int> valid_literals(int j, int t, uint32_t i) {
    std::vector<int> lits;
    for (const auto& v : ga.associated_outputs[static_cast<size_t>(j)]) {
      const int bit = input_pos[static_cast<size_t>(j)].at(v);
      const int ov = v_out_t(j, t, i, v);
      lits.push_back((i >> bit) & 1 ? ov : -ov);
    }
    return lits;
  }

  // -------------------------------------------------------------------------
  // (a) certificate totality and determinism
  // -------------------------------------------------------------------------
  void guarantee_totality(int j) {
    for (int u = 0; u < n_g(j); ++u)
      for (uint32_t i = 0; i < cubes(j); ++i) {
        std::vector<int> any;
        for (int u2 = 0; u2 < n_g(j); ++u2) any.push_back(v_trans_g(j, u, i, u2));
        emit(any);
        for (int a = 0; a < n_g(j); ++a)
          for (int b = a + 1; b < n_g(j); ++b)
            emit({-v_trans_g(j, u, i, a), -v_trans_g(j, u, i, b)});
      }
  }

  // -------------------------------------------------------------------------
  // (b) the certificate simulates the strategy on the guarantee outputs
  // -------------------------------------------------------------------------
  void self_simulation(int j) {
    emit({v_sim_tg(j, 0, 0)});
    const auto& gout = ga.guarantee_outputs[static_cast<size_t>(j)];
    const uint32_t label_cubes = mealy() ? cubes(j) : 1;
    for (int t = 0; t < n_t(j); ++t)
      for (int u = 0; u < n_g(j); ++u) {
        const int sim = v_sim_tg(j, t, u);
        for (uint32_t i = 0; i < label_cubes; ++i)
          for (const auto& v : gout) {
            const int ot = v_out_t(j, t, i, v);
            const int og = v_out_g(j, u, i, v);
            emit({-sim, -ot, og});
            emit({-sim, ot, -og});
          }
        for (uint32_t i = 0; i < cubes(j); ++i)
          for (int t2 = 0; t2 < n_t(j); ++t2)
            for (int u2 = 0; u2 < n_g(j); ++u2)
              emit({-sim, -v_trans_t(j, t, i, t2), -v_trans_g(j, u, i, u2),
                    v_sim_tg(j, t2, u2)});
      }
  }

  // -------------------------------------------------------------------------
  // (c) the strategy's predictions track every relevant certificate
  // -------------------------------------------------------------------------
  void cross_simulation(int k, int j) {
    if (!relevant[static_cast<size_t>(j)].count(k))
      throw InvalidInput("cross_simulation: process " + name(k) + " is not relevant to " +
                         name(j));
    emit({v_sim_gt(k, j, 0, 0)});

    // Shared observation: agreement variables between I_k and I_j.
    const auto& ik = arch.processes[static_cast<size_t>(k)].inputs;
    std::vector<std::pair<int, int>> shared;  // (bit in I_k, bit in I_j)
    for (size_t b = 0; b < ik.size(); ++b) {
      auto it = input_pos[static_cast<size_t>(j)].find(ik[b]);
      if (it != input_pos[static_cast<size_t>(j)].end())
        shared.push_back({static_cast<int>(b), it->second});
    }
    // Group k's input cubes by their shared projection for pairing.
    std::unordered_map<uint32_t, std::vector<uint32_t>> by_proj;
    for (uint32_t i = 0; i < cubes(k); ++i) {
      uint32_t key = 0;
      for (size_t s = 0; s < shared.size(); ++s)
        key |= ((i >> shared[s].first) & 1u) << s;
      by_proj[key].push_back(i);
    }

    // Outputs of k that j observes and predicts.
    std::vector<std::string> watched;
    for (const auto& v : ga.guarantee_outputs[static_cast<size_t>(k)])
      if (input_pos[static_cast<size_t>(j)].count(v)) watched.push_back(v);

    for (int u = 0; u < n_g(k); ++u)
      for (int t = 0; t < n_t(j); ++t) {
        const int sim = v_sim_gt(k, j, u, t);
        if (!mealy()) {
          for (const auto& v : watched) {
            const int ot = v_out_t(j, t, 0, v);
            const int og = v_out_g(k, u, 0, v);
            emit({-sim, -ot, og});
            emit({-sim, ot, -og});
          }
        }
        for (uint32_t i2 = 0; i2 < cubes(j); ++i2) {
          uint32_t key = 0;
          for (size_t s = 0; s < shared.size(); ++s)
            key |= ((i2 >> shared[s].second) & 1u) << s;
          auto it = by_proj.find(key);
          if (it == by_proj.end()) continue;
          const std::vector<int> valid = valid_literals(j, t, i2);
          for (uint32_t i : it->second) {
            if (mealy()) {
              for (const auto& v : watched) {
                const int ot = v_out_t(j, t, i2, v);
                const int og = v_out_g(k, u, i, v);
                std::vector<int> base{-sim};
                for (int l : valid) base.push_back(-l);
                std::vector<int> c1 = base;
                c1.push_back(-ot);
                c1.push_back(og);
                emit(std::move(c1));
                std::vector<int> c2 = std::move(base);
                c2.push_back(ot);
                c2.push_back(-og);
                emit(std::move(c2));
              }
            }
            for (int u2 = 0; u2 < n_g(k); ++u2)
              for (int t2 = 0; t2 < n_t(j); ++t2)
                emit({-sim, -v_trans_g(k, u, i, u2), -v_trans_t(j, t, i2, t2),
                      v_sim_gt(k, j, u2, t2)});
          }
        }
      }
  }

  // -------------------------------------------------------------------------
  // (d) a transition exists exactly when the input matches the predictions
  // -------------------------------------------------------------------------
  void local_totality(int j) {
    for (int t = 0; t < n_t(j); ++t)
      for (uint32_t i = 0; i < cubes(j); ++i) {
        const std::vector<int> valid = valid_literals(j, t, i);
        std::vector<int> some;
        for (int l : valid) some.push_back(-l);
        for (int t2 = 0; t2 < n_t(j); ++t2) some.push_back(v_trans_t(j, t, i, t2));
        emit(std::move(some));
        for (int t2 = 0; t2 < n_t(j); ++t2) {
          const int tr = v_trans_t(j, t, i, t2);
          for (int l : valid) emit({-tr, l});
        }
        for (int a = 0; a < n_t(j); ++a)
          for (int b = a + 1; b < n_t(j); ++b)
            emit({-v_trans_t(j, t, i, a), -v_trans_t(j, t, i, b)});
      }
  }

  // -------------------------------------------------------------------------
  // (e) valid annotation of the strategy's run graph against the UCA
  // -------------------------------------------------------------------------
  int width(int j) const { return layout.bound_width[static_cast<size_t>(j)]; }

  /// Equality auxiliary e <-> (bit b of node n1 == bit b of node n2);
  /// symmetric, so the key is canonicalized. Defining clauses are emitted on
  /// first use.
  int eq_var(int j, std::pair<int, int> n1, std::pair<int, int> n2, int b) {
    if (n2 < n1) std::swap(n1, n2);
    const std::string nm = "eq(" + name(j) + "," + std::to_string(n1.first) + "," +
                           std::to_string(n1.second) + "," + std::to_string(n2.first) + "," +
                           std::to_string(n2.second) + "," + std::to_string(b) + ")";
    const int existing = cnf.registry.find(nm);
    if (existing) return existing;
    const int e = var(nm);
    const int x = v_bound_bit(j, n1.first, n1.second, b);
    const int y = v_bound_bit(j, n2.first, n2.second, b);
    emit({-e, -x, y});
    emit({-e, x, -y});
    emit({e, x, y});
    emit({e, -x, -y});
    return e;
  }

  /// One-sided comparator: cmp -> bound(to) >= bound(from), strict when
  /// requested. Memoized per (from, to, strictness).
  int cmp_var(int j, std::pair<int, int> from, std::pair<int, int> to, bool strict) {
    const std::string nm = "cmp(" + name(j) + "," + std::to_string(from.first) + "," +
                           std::to_string(from.second) + "," + std::to_string(to.first) + "," +
                           std::to_string(to.second) + (strict ? ",gt)" : ",ge)");
    const int existing = cnf.registry.find(nm);
    if (existing) return existing;
    const int c = var(nm);
    const int w = width(j);
    std::vector<int> prefix;  // eq vars of the bits above the current one
    for (int b = w - 1; b >= 0; --b) {
      std::vector<int> clause{-c};
      for (int e : prefix) clause.push_back(-e);
      clause.push_back(v_bound_bit(j, to.first, to.second, b));
      clause.push_back(-v_bound_bit(j, from.first, from.second, b));
      emit(std::move(clause));
      prefix.push_back(eq_var(j, from, to, b));
    }
    if (strict) {
      std::vector<int> clause{-c};
      for (int e : prefix) clause.push_back(-e);
      emit(std::move(clause));
    }
    return c;
  }

  void annotation(int j) {
    const auto& uca = ucas[static_cast<size_t>(j)];
    emit({v_reach(j, 0, uca.initial)});
    const auto& pos = input_pos[static_cast<size_t>(j)];
    for (int t = 0; t < n_t(j); ++t)
      for (uint32_t i = 0; i < cubes(j); ++i)
        for (const auto& bucket : uca.trans)
          for (const auto& tr : bucket) {
            // Split the guard into the part fixed by the input cube, the part
            // depending on the strategy's own outputs, and free atoms.
            bool input_ok = true;
            std::vector<int> out_conds;
            for (const auto& [atom, pol] : tr.guard.lits) {
              auto pit = pos.find(atom);
              if (pit != pos.end()) {
                if ((((i >> pit->second) & 1u) != 0) != pol) {
                  input_ok = false;
                  break;
                }
              } else if (own_out[static_cast<size_t>(j)].count(atom)) {
                const int ov = v_out_t(j, t, i, atom);
                out_conds.push_back(pol ? ov : -ov);
              }
              // atoms of other processes are unconstrained here
            }
            if (!input_ok) continue;
            const bool strict = uca.rejecting[static_cast<size_t>(tr.to)];
            for (int t2 = 0; t2 < n_t(j); ++t2) {
              std::vector<int> base{-v_reach(j, t, tr.from), -v_trans_t(j, t, i, t2)};
              for (int l : out_conds) base.push_back(-l);
              std::vector<int> c1 = base;
              c1.push_back(v_reach(j, t2, tr.to));
              emit(std::move(c1));
              std::vector<int> c2 = std::move(base);
              c2.push_back(cmp_var(j, {t, tr.from}, {t2, tr.to}, strict));
              emit(std::move(c2));
            }
          }
  }

  // -------------------------------------------------------------------------
  // Mealy extra: some completion of every environment input is accepted
  // -------------------------------------------------------------------------
  void mealy_env_totality(int j) {
    if (!mealy()) return;
    const auto& assoc = ga.associated_outputs[static_cast<size_t>(j)];
    uint32_t assoc_mask = 0;
    for (const auto& v : assoc)
      assoc_mask |= 1u << input_pos[static_cast<size_t>(j)].at(v);
    for (int t = 0; t < n_t(j); ++t)
      for (uint32_t env = 0; env < cubes(j); ++env) {
        if (env & assoc_mask) continue;  // enumerate env parts once
        std::vector<int> clause;
        for (uint32_t i = 0; i < cubes(j); ++i) {
          if ((i & ~assoc_mask) != env) continue;
          for (int t2 = 0; t2 < n_t(j); ++t2) clause.push_back(v_trans_t(j, t, i, t2));
        }
        emit(std::move(clause));
      }
  }
};

Encoder::Encoder(const Architecture& arch, const Decomposition& dec,
                 const std::vector<std::set<int>>& relevant, const GuaranteeAlphabet& ga,
                 const std::vector<UniversalCoBuchi>& ucas, const Bounds& bounds,
                 SemanticsMode mode, EncoderLimits limits)
    : impl_(std::make_unique<Impl>()) {
  const size_t n = arch.processes.size();
  if (dec.subspecs.size() != n || relevant.size() != n || ucas.size() != n ||
      ga.guarantee_outputs.size() != n || bounds.strategy_size.size() != n ||
      bounds.cert_size.size() != n)
    throw InvalidInput("encoder: per-process argument vectors disagree in size");
  for (size_t j = 0; j < n; ++j) {
    if (bounds.strategy_size[j] < 1 || bounds.cert_size[j] < 1)
      throw InvalidInput("encoder: bounds must be at least one state");
    if (static_cast<int>(arch.processes[j].inputs.size()) > limits.max_process_inputs)
      throw ResourceError("process " + arch.processes[j].name + " has too many inputs (" +
                          std::to_string(arch.processes[j].inputs.size()) + ")");
  }

  auto& im = *impl_;
  im.arch = arch;
  im.relevant = relevant;
  im.ga = ga;
  im.ucas = ucas;
  im.bounds = bounds;
  im.mode = mode;
  im.limits = limits;

  im.layout.mode = mode;
  im.layout.strategy_size = bounds.strategy_size;
  im.layout.cert_size = bounds.cert_size;
  for (size_t j = 0; j < n; ++j) {
    const auto& p = arch.processes[j];
    im.layout.process_names.push_back(p.name);
    im.layout.inputs.push_back(p.inputs);
    std::vector<std::string> labels = p.outputs;
    for (const auto& v : ga.associated_outputs[j]) labels.push_back(v);
    im.layout.label_vars.push_back(labels);
    im.layout.assoc_vars.push_back(ga.associated_outputs[j]);
    im.layout.guarantee_outputs.push_back(ga.guarantee_outputs[j]);
    im.layout.uca_states.push_back(ucas[j].num_states());
    const long total = static_cast<long>(bounds.strategy_size[j]) * ucas[j].num_states();
    int w = 1;
    while ((1L << w) <= total) ++w;
    im.layout.bound_width.push_back(w);

    std::map<std::string, int> pos;
    for (size_t b = 0; b < p.inputs.size(); ++b) pos[p.inputs[b]] = static_cast<int>(b);
    im.input_pos.push_back(std::move(pos));
    im.own_out.emplace_back(p.outputs.begin(), p.outputs.end());
  }

  // Pre-allocate all primary variables in a fixed order so that the DIMACS
  // index of a named variable never depends on which families were emitted.
  for (int j = 0; j < static_cast<int>(n); ++j) {
    const uint32_t label_cubes = im.mealy() ? im.cubes(j) : 1;
    for (int t = 0; t < im.n_t(j); ++t)
      for (uint32_t i = 0; i < im.cubes(j); ++i)
        for (int t2 = 0; t2 < im.n_t(j); ++t2) im.v_trans_t(j, t, i, t2);
    for (int t = 0; t < im.n_t(j); ++t)
      for (uint32_t i = 0; i < label_cubes; ++i)
        for (const auto& v : im.layout.label_vars[static_cast<size_t>(j)])
          im.v_out_t(j, t, i, v);
    for (int u = 0; u < im.n_g(j); ++u)
      for (uint32_t i = 0; i < im.cubes(j); ++i)
        for (int u2 = 0; u2 < im.n_g(j); ++u2) im.v_trans_g(j, u, i, u2);
    for (int u = 0; u < im.n_g(j); ++u)
      for (uint32_t i = 0; i < label_cubes; ++i)
        for (const auto& v : im.layout.guarantee_outputs[static_cast<size_t>(j)])
          im.v_out_g(j, u, i, v);
    for (int t = 0; t < im.n_t(j); ++t)
      for (int u = 0; u < im.n_g(j); ++u) im.v_sim_tg(j, t, u);
    for (int k : im.relevant[static_cast<size_t>(j)])
      for (int u = 0; u < im.n_g(k); ++u)
        for (int t = 0; t < im.n_t(j); ++t) im.v_sim_gt(k, j, u, t);
    for (int t = 0; t < im.n_t(j); ++t)
      for (int q = 0; q < im.ucas[static_cast<size_t>(j)].num_states(); ++q) {
        im.v_reach(j, t, q);
        for (int b = 0; b < im.width(j); ++b) im.v_bound_bit(j, t, q, b);
      }
  }
}

Encoder::~Encoder() = default;

void Encoder::add_guarantee_totality(int j) { impl_->guarantee_totality(j); }
void Encoder::add_self_simulation(int j) { impl_->self_simulation(j); }
void Encoder::add_cross_simulation(int k, int j) { impl_->cross_simulation(k, j); }
void Encoder::add_local_totality(int j) { impl_->local_totality(j); }
void Encoder::add_annotation(int j) { impl_->annotation(j); }
void Encoder::add_mealy_env_totality(int j) { impl_->mealy_env_totality(j); }

void Encoder::encode_all() {
  for (int j = 0; j < impl_->num_procs(); ++j) {
    add_guarantee_totality(j);
    add_self_simulation(j);
    for (int k : impl_->relevant[static_cast<size_t>(j)]) add_cross_simulation(k, j);
    add_local_totality(j);
    add_annotation(j);
    add_mealy_env_totality(j);
  }
}

const CnfInstance& Encoder::cnf() const { return impl_->cnf; }
CnfInstance Encoder::take_cnf() { return std::move(impl_->cnf); }
const EncodingLayout& Encoder::layout() const { return impl_->layout; }

int Encoder::v_trans_t(int j, int t, uint32_t i, int t2) { return impl_->v_trans_t(j, t, i, t2); }
int Encoder::v_out_t(int j, int t, uint32_t i, const std::string& v) {
  return impl_->v_out_t(j, t, i, v);
}
int Encoder::v_trans_g(int j, int u, uint32_t i, int u2) { return impl_->v_trans_g(j, u, i, u2); }
int Encoder::v_out_g(int j, int u, uint32_t i, const std::string& v) {
  return impl_->v_out_g(j, u, i, v);
}
int Encoder::v_sim_tg(int j, int t, int u) { return impl_->v_sim_tg(j, t, u); }
int Encoder::v_sim_gt(int k, int j, int u, int t) { return impl_->v_sim_gt(k, j, u, t); }
int Encoder::v_reach(int j, int t, int q) { return impl_->v_reach(j, t, q); }
int Encoder::v_bound_bit(int j, int t, int q, int b) { return impl_->v_bound_bit(j, t, q, b); }

EncodedProblem encode(const Architecture& arch, const Decomposition& dec,
                      const std::vector<std::set<int>>& relevant, const GuaranteeAlphabet& ga,
                      const std::vector<UniversalCoBuchi>& ucas, const Bounds& bounds,
                      SemanticsMode mode, EncoderLimits limits) {
  Encoder enc(arch, dec, relevant, ga, ucas, bounds, mode, limits);
  enc.encode_all();
  return {enc.take_cnf(), enc.layout()};
}

}  // namespace certsynt
