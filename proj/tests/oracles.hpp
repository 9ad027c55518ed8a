#pragma once

// Independent reference implementations used to cross-check the library.
// Everything in this header is written directly from the mathematical
// definitions and deliberately shares no code with the implementation:
// straight-line, unoptimized, and exhaustive where feasible.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "certsynt/ltl.hpp"
#include "certsynt/machine.hpp"

namespace oracle {

using certsynt::FormulaPtr;
using certsynt::Letter;
using certsynt::LtlKind;
using certsynt::Machine;
using certsynt::Trace;

// ---------------------------------------------------------------------------
// Direct LTL evaluation on an ultimately periodic word stem . loop^omega.
// Positions 0..S+L-1 with the successor of the last position wrapping to S.
// Until/Eventually are least fixpoints (iterate up from false), Globally is a
// greatest fixpoint (iterate down from true).
// ---------------------------------------------------------------------------

inline std::vector<bool> eval_positions(const FormulaPtr& f, const Trace& stem,
                                        const Trace& loop) {
  size_t s = stem.size(), n = s + loop.size();
  auto succ = [&](size_t p) { return p + 1 < n ? p + 1 : s; };
  auto letter = [&](size_t p) -> const Letter& { return p < s ? stem[p] : loop[p - s]; };

  std::vector<bool> v(n, false);
  auto child = [&](int i) { return eval_positions(f->children[i], stem, loop); };
  switch (f->kind) {
    case LtlKind::Atom:
      for (size_t p = 0; p < n; ++p) v[p] = letter(p).count(f->atom) > 0;
      return v;
    case LtlKind::True:
      return std::vector<bool>(n, true);
    case LtlKind::False:
      return v;
    case LtlKind::Not: {
      auto a = child(0);
      for (size_t p = 0; p < n; ++p) v[p] = !a[p];
      return v;
    }
    case LtlKind::And: {
      auto a = child(0), b = child(1);
      for (size_t p = 0; p < n; ++p) v[p] = a[p] && b[p];
      return v;
    }
    case LtlKind::Or: {
      auto a = child(0), b = child(1);
      for (size_t p = 0; p < n; ++p) v[p] = a[p] || b[p];
      return v;
    }
    case LtlKind::Implies: {
      auto a = child(0), b = child(1);
      for (size_t p = 0; p < n; ++p) v[p] = !a[p] || b[p];
      return v;
    }
    case LtlKind::Next: {
      auto a = child(0);
      for (size_t p = 0; p < n; ++p) v[p] = a[succ(p)];
      return v;
    }
    case LtlKind::Until: {
      auto a = child(0), b = child(1);
      for (size_t round = 0; round <= n; ++round)
        for (size_t p = 0; p < n; ++p) v[p] = b[p] || (a[p] && v[succ(p)]);
      return v;
    }
    case LtlKind::Eventually: {
      auto a = child(0);
      v = a;
      for (size_t round = 0; round <= n; ++round)
        for (size_t p = 0; p < n; ++p) v[p] = v[p] || v[succ(p)];
      return v;
    }
    case LtlKind::Globally: {
      auto a = child(0);
      v = a;
      for (size_t round = 0; round <= n; ++round)
        for (size_t p = 0; p < n; ++p) v[p] = v[p] && v[succ(p)];
      return v;
    }
  }
  throw std::logic_error("unhandled formula kind");
}

inline bool eval_lasso(const FormulaPtr& f, const Trace& stem, const Trace& loop) {
  return eval_positions(f, stem, loop)[0];
}

// ---------------------------------------------------------------------------
// Random generators (all seeded by the caller for reproducibility).
// ---------------------------------------------------------------------------

inline int rnd(std::mt19937& rng, int lo, int hi) {  // inclusive range
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random formula with at most `ops` operator nodes.
inline FormulaPtr random_formula(std::mt19937& rng, int ops,
                                 const std::vector<std::string>& atoms) {
  using namespace certsynt::ltl;
  if (ops <= 0) {
    int pick = rnd(rng, 0, static_cast<int>(atoms.size()) + 1);
    if (pick == static_cast<int>(atoms.size())) return tru();
    if (pick == static_cast<int>(atoms.size()) + 1) return fls();
    return atom(atoms[static_cast<size_t>(pick)]);
  }
  switch (rnd(rng, 0, 8)) {
    case 0: return mk_not(random_formula(rng, ops - 1, atoms));
    case 1: return mk_next(random_formula(rng, ops - 1, atoms));
    case 2: return mk_eventually(random_formula(rng, ops - 1, atoms));
    case 3: return mk_globally(random_formula(rng, ops - 1, atoms));
    case 4: {
      int left = rnd(rng, 0, ops - 1);
      return mk_and(random_formula(rng, left, atoms),
                    random_formula(rng, ops - 1 - left, atoms));
    }
    case 5: {
      int left = rnd(rng, 0, ops - 1);
      return mk_or(random_formula(rng, left, atoms),
                   random_formula(rng, ops - 1 - left, atoms));
    }
    case 6: {
      int left = rnd(rng, 0, ops - 1);
      return mk_implies(random_formula(rng, left, atoms),
                        random_formula(rng, ops - 1 - left, atoms));
    }
    default: {
      int left = rnd(rng, 0, ops - 1);
      return mk_until(random_formula(rng, left, atoms),
                      random_formula(rng, ops - 1 - left, atoms));
    }
  }
}

inline Letter random_letter(std::mt19937& rng, const std::vector<std::string>& atoms) {
  Letter l;
  for (const auto& a : atoms)
    if (rnd(rng, 0, 1)) l.insert(a);
  return l;
}

inline Trace random_trace(std::mt19937& rng, const std::vector<std::string>& atoms,
                          int min_len, int max_len) {
  Trace t;
  int len = rnd(rng, min_len, max_len);
  for (int i = 0; i < len; ++i) t.push_back(random_letter(rng, atoms));
  return t;
}

/// Random total Moore machine over the given variables.
inline Machine random_total_machine(std::mt19937& rng, std::vector<std::string> inputs,
                                    std::vector<std::string> outputs, int n_states) {
  Machine m;
  m.inputs = std::move(inputs);
  m.outputs = std::move(outputs);
  for (int s = 0; s < n_states; ++s) {
    auto& st = m.add_state("q" + std::to_string(s));
    st.label = static_cast<uint32_t>(rnd(rng, 0, (1 << m.outputs.size()) - 1));
    for (uint32_t c = 0; c < m.cube_count(); ++c) st.succ[c] = rnd(rng, 0, n_states - 1);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Valid histories, straight from the definition: drive every guarantee on the
// prefix's input projection and compare its emitted guarantee outputs at every
// position with the prefix.
// ---------------------------------------------------------------------------

inline bool valid_history_naive(const Trace& prefix,
                                const std::vector<const Machine*>& guarantees) {
  for (const Machine* g : guarantees) {
    int state = g->initial;
    for (const auto& sigma_k : prefix) {
      for (size_t b = 0; b < g->outputs.size(); ++b) {
        bool expected = (g->states[static_cast<size_t>(state)].label >> b) & 1u;
        bool seen = sigma_k.count(g->outputs[b]) > 0;
        if (expected != seen) return false;
      }
      uint32_t cube = 0;
      for (size_t b = 0; b < g->inputs.size(); ++b)
        if (sigma_k.count(g->inputs[b])) cube |= 1u << b;
      state = g->states[static_cast<size_t>(state)].succ[cube];
      if (state < 0) throw std::logic_error("guarantee must be total");
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Simulation by exhaustive enumeration over all relations R subset of
// (concrete states) x (abstract states). The union of all relations that
// satisfy the simulation conditions is the greatest simulation relation.
// Feasible for |T_c| * |T_a| <= ~12 pairs.
// ---------------------------------------------------------------------------

inline std::optional<std::set<std::pair<int, int>>> simulation_bruteforce(
    const Machine& abstract, const Machine& concrete, const std::set<std::string>& obs) {
  int nc = static_cast<int>(concrete.states.size());
  int na = static_cast<int>(abstract.states.size());
  int pairs = nc * na;
  if (pairs > 16) throw std::logic_error("instance too large for brute force");

  auto obs_letter = [&](const Machine& m, int s, uint32_t c) {
    Letter full = m.label_letter(s, c);
    Letter cut;
    for (const auto& v : full)
      if (obs.count(v)) cut.insert(v);
    return cut;
  };
  // Translate a concrete input cube to the abstract machine's bit order.
  auto cube_for = [&](uint32_t cube) {
    Letter l = concrete.cube_to_letter(cube);
    uint32_t out = 0;
    for (size_t b = 0; b < abstract.inputs.size(); ++b)
      if (l.count(abstract.inputs[b])) out |= 1u << b;
    return out;
  };

  auto is_simulation = [&](uint64_t rel) {
    for (int c = 0; c < nc; ++c)
      for (int a = 0; a < na; ++a) {
        if (!((rel >> (c * na + a)) & 1)) continue;
        for (uint32_t cube = 0; cube < concrete.cube_count(); ++cube) {
          if (obs_letter(concrete, c, cube) != obs_letter(abstract, a, cube_for(cube)))
            return false;
          int c2 = concrete.states[static_cast<size_t>(c)].succ[cube];
          if (c2 < 0) continue;
          int a2 = abstract.states[static_cast<size_t>(a)].succ[cube_for(cube)];
          if (a2 < 0 || !((rel >> (c2 * na + a2)) & 1)) return false;
        }
      }
    return true;
  };

  uint64_t greatest = 0;
  for (uint64_t rel = 0; rel < (uint64_t(1) << pairs); ++rel)
    if (is_simulation(rel)) greatest |= rel;

  if (!((greatest >> (concrete.initial * na + abstract.initial)) & 1)) return std::nullopt;
  std::set<std::pair<int, int>> result;
  for (int c = 0; c < nc; ++c)
    for (int a = 0; a < na; ++a)
      if ((greatest >> (c * na + a)) & 1) result.insert({c, a});
  return result;
}

// ---------------------------------------------------------------------------
// Annotation existence on small directed graphs.
// ---------------------------------------------------------------------------

struct TinyGraph {
  int n = 0;
  int initial = 0;
  std::vector<bool> rejecting;
  std::vector<std::vector<int>> adj;
};

inline std::vector<bool> reachable_nodes(const TinyGraph& g) {
  std::vector<bool> seen(static_cast<size_t>(g.n), false);
  std::vector<int> stack = {g.initial};
  seen[static_cast<size_t>(g.initial)] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.adj[static_cast<size_t>(v)])
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = true;
        stack.push_back(w);
      }
  }
  return seen;
}

/// Value iteration: the least annotation candidate grows monotonically; if it
/// still grows after n rounds there is a rejecting cycle and no annotation.
inline bool annotation_exists_value_iteration(const TinyGraph& g) {
  auto reach = reachable_nodes(g);
  std::vector<long long> lam(static_cast<size_t>(g.n), 0);
  for (int round = 0; round <= g.n + 1; ++round) {
    bool changed = false;
    for (int v = 0; v < g.n; ++v) {
      if (!reach[static_cast<size_t>(v)]) continue;
      for (int w : g.adj[static_cast<size_t>(v)]) {
        long long need = lam[static_cast<size_t>(v)] + (g.rejecting[static_cast<size_t>(w)] ? 1 : 0);
        if (lam[static_cast<size_t>(w)] < need) {
          lam[static_cast<size_t>(w)] = need;
          changed = true;
        }
      }
    }
    if (!changed) return true;
  }
  return false;
}

/// Literal exhaustive search over all annotations lambda: reachable -> {0..n}.
/// Only usable for very small graphs.
inline bool annotation_exists_exhaustive(const TinyGraph& g) {
  auto reach = reachable_nodes(g);
  std::vector<int> nodes;
  for (int v = 0; v < g.n; ++v)
    if (reach[static_cast<size_t>(v)]) nodes.push_back(v);
  std::vector<int> lam(static_cast<size_t>(g.n), -1);

  std::function<bool(size_t)> assign = [&](size_t idx) -> bool {
    if (idx == nodes.size()) {
      for (int v : nodes)
        for (int w : g.adj[static_cast<size_t>(v)]) {
          if (g.rejecting[static_cast<size_t>(w)]) {
            if (lam[static_cast<size_t>(w)] <= lam[static_cast<size_t>(v)]) return false;
          } else if (lam[static_cast<size_t>(w)] < lam[static_cast<size_t>(v)]) {
            return false;
          }
        }
      return true;
    }
    for (int value = 0; value <= g.n; ++value) {
      lam[static_cast<size_t>(nodes[idx])] = value;
      if (assign(idx + 1)) return true;
    }
    lam[static_cast<size_t>(nodes[idx])] = -1;
    return false;
  };
  return assign(0);
}

inline TinyGraph random_graph(std::mt19937& rng, int max_nodes, int percent_edge,
                              int percent_rejecting) {
  TinyGraph g;
  g.n = rnd(rng, 1, max_nodes);
  g.initial = 0;
  g.rejecting.resize(static_cast<size_t>(g.n));
  g.adj.resize(static_cast<size_t>(g.n));
  for (int v = 0; v < g.n; ++v) {
    g.rejecting[static_cast<size_t>(v)] = rnd(rng, 1, 100) <= percent_rejecting;
    for (int w = 0; w < g.n; ++w)
      if (rnd(rng, 1, 100) <= percent_edge) g.adj[static_cast<size_t>(v)].push_back(w);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of total Moore machines with exactly n states.
// Feasible for n <= 2, |I| <= 2, |O| <= 1. The callback returns true to stop
// the enumeration early (e.g. once a satisfying machine is found).
// ---------------------------------------------------------------------------

template <typename F>
bool for_each_moore(int n_states, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, F&& callback) {
  uint32_t cubes = 1u << inputs.size();
  uint64_t label_combos = 1;
  for (int s = 0; s < n_states; ++s) label_combos *= (1u << outputs.size());
  uint64_t trans_slots = static_cast<uint64_t>(n_states) * cubes;
  uint64_t trans_combos = 1;
  for (uint64_t i = 0; i < trans_slots; ++i) {
    trans_combos *= static_cast<uint64_t>(n_states);
    if (trans_combos > (uint64_t(1) << 40)) throw std::logic_error("enumeration too large");
  }

  for (uint64_t lab = 0; lab < label_combos; ++lab) {
    for (uint64_t tr = 0; tr < trans_combos; ++tr) {
      Machine m;
      m.inputs = inputs;
      m.outputs = outputs;
      uint64_t lab_rest = lab, tr_rest = tr;
      for (int s = 0; s < n_states; ++s) {
        auto& st = m.add_state("q" + std::to_string(s));
        st.label = static_cast<uint32_t>(lab_rest % (1u << outputs.size()));
        lab_rest /= (1u << outputs.size());
        for (uint32_t c = 0; c < cubes; ++c) {
          st.succ[c] = static_cast<int>(tr_rest % static_cast<uint64_t>(n_states));
          tr_rest /= static_cast<uint64_t>(n_states);
        }
      }
      if (callback(m)) return true;
    }
  }
  return false;
}

}  // namespace oracle
