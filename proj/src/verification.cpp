#include "certsynt/verification.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace certsynt {

bool VerificationReport::accepted() const {
  for (const auto& c : checks)
    if (!c.informational && !c.passed) return false;
  return true;
}

namespace {

std::string letters_text(const Trace& tr) {
  std::string out;
  for (const auto& l : tr) {
    out += "{";
    bool first = true;
    for (const auto& v : l) {
      if (!first) out += ",";
      out += v;
      first = false;
    }
    out += "}";
  }
  return out;
}

/// Mealy composition cannot be formed state-by-state upfront: outputs at a
/// position depend on inputs that include other processes' outputs at the
/// same position. The run graph is built directly instead, enumerating for
/// every environment input the output letters on which all processes agree.
RunGraph mealy_composed_run_graph(const Architecture& arch,
                                  const std::vector<const Machine*>& strategies,
                                  const UniversalCoBuchi& uca) {
  const std::vector<std::string> env = arch.env_outputs;
  std::vector<std::string> outputs;
  for (const auto& p : arch.processes)
    outputs.insert(outputs.end(), p.outputs.begin(), p.outputs.end());
  std::sort(outputs.begin(), outputs.end());
  if (env.size() > 16 || outputs.size() > 16)
    throw ResourceError("composed run graph: too many variables to enumerate");

  using Composite = std::vector<int>;  // one state per process, then UCA state
  RunGraph rg;
  std::vector<Composite> composites;
  std::map<Composite, int> index;
  std::deque<int> todo;
  auto node_of = [&](const Composite& c) {
    auto it = index.find(c);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(rg.nodes.size());
    index[c] = id;
    composites.push_back(c);
    const int q = c.back();
    rg.nodes.push_back({id, q, uca.rejecting[static_cast<size_t>(q)]});
    rg.edges.emplace_back();
    todo.push_back(id);
    return id;
  };

  Composite init(strategies.size() + 1, 0);
  for (size_t i = 0; i < strategies.size(); ++i) init[i] = strategies[i]->initial;
  init.back() = uca.initial;
  rg.initial = node_of(init);

  while (!todo.empty()) {
    const int id = todo.front();
    todo.pop_front();
    const Composite current = composites[static_cast<size_t>(id)];
    const int q = current.back();
    std::set<int> seen_targets;
    for (uint32_t e = 0; e < (1u << env.size()); ++e) {
      Letter env_letter;
      for (size_t b = 0; b < env.size(); ++b)
        if (e & (1u << b)) env_letter.insert(env[b]);
      for (uint32_t g = 0; g < (1u << outputs.size()); ++g) {
        Letter letter = env_letter;
        for (size_t b = 0; b < outputs.size(); ++b)
          if (g & (1u << b)) letter.insert(outputs[b]);
        // Consistency: every process, fed this letter, emits exactly its part
        // of it and can move.
        bool ok = true;
        Composite next(current.size());
        for (size_t i = 0; i < strategies.size() && ok; ++i) {
          const Machine& m = *strategies[i];
          const uint32_t cube = m.letter_to_cube(letter);
          Letter own;
          for (const auto& v : m.outputs)
            if (letter.count(v)) own.insert(v);
          if (m.label_letter(current[i], cube) != own) {
            ok = false;
            break;
          }
          const int succ = m.states[static_cast<size_t>(current[i])].succ[cube];
          if (succ < 0) {
            ok = false;
            break;
          }
          next[i] = succ;
        }
        if (!ok) continue;
        for (const auto& tr : uca.trans[static_cast<size_t>(q)]) {
          if (!tr.guard.sat_by(letter)) continue;
          next.back() = tr.to;
          const int target = node_of(next);
          if (seen_targets.insert(target).second)
            rg.edges[static_cast<size_t>(id)].push_back({target, letter});
        }
      }
    }
  }
  return rg;
}

}  // namespace

VerificationReport verify_solution(const Architecture& arch, const ConjunctiveSpec& spec,
                                   const std::vector<ProcessSolution>& solution,
                                   const std::vector<std::set<int>>& relevant) {
  const size_t n = arch.processes.size();
  if (solution.size() != n)
    throw InvalidInput("verify_solution: expected one solution entry per process");
  if (relevant.size() != n)
    throw InvalidInput("verify_solution: relevant-process map has the wrong size");
  for (size_t i = 0; i < n; ++i) {
    const auto& p = arch.processes[i];
    if (solution[i].strategy.inputs != p.inputs)
      throw InvalidInput("verify_solution: strategy of " + p.name +
                         " reads the wrong inputs");
    if (solution[i].certificate.inputs != p.inputs)
      throw InvalidInput("verify_solution: certificate of " + p.name +
                         " reads the wrong inputs");
  }
  bool mealy = false, moore = false;
  for (const auto& s : solution) {
    if (s.strategy.mealy)
      mealy = true;
    else
      moore = true;
  }
  if (mealy && moore) throw InvalidInput("verify_solution: mixed Moore/Mealy solution");

  const GuaranteeAlphabet ga = guarantee_alphabet(arch, relevant);
  VerificationReport report;

  // 1. certificates simulate their strategies
  for (size_t i = 0; i < n; ++i) {
    CheckResult cr;
    cr.name = "certificate_simulates_strategy(" + arch.processes[i].name + ")";
    const std::set<std::string> obs(ga.guarantee_outputs[i].begin(),
                                    ga.guarantee_outputs[i].end());
    try {
      const auto rel = simulates(solution[i].certificate, solution[i].strategy, obs);
      cr.passed = rel.has_value();
      cr.detail = rel ? "simulation relation with " + std::to_string(rel->size()) + " pairs"
                      : "initial states are not related";
    } catch (const InvalidInput& e) {
      cr.passed = false;
      cr.detail = e.what();
    }
    report.checks.push_back(std::move(cr));
  }

  // 2. the composed system satisfies the full specification
  {
    CheckResult cr;
    cr.name = "composition_satisfies_specification";
    try {
      const UniversalCoBuchi uca = ltl_to_uca(spec.conjunction(), arch.all_variables());
      RunGraph rg;
      if (mealy) {
        std::vector<const Machine*> strategies;
        for (const auto& s : solution) strategies.push_back(&s.strategy);
        rg = mealy_composed_run_graph(arch, strategies, uca);
      } else {
        Machine composed = solution[0].strategy;
        for (size_t i = 1; i < n; ++i) composed = parallel_compose(composed, solution[i].strategy);
        rg = build_run_graph(composed, uca);
      }
      const auto annotation = find_valid_annotation(rg);
      if (annotation) {
        long max_val = 0;
        for (long v : *annotation) max_val = std::max(max_val, v);
        cr.passed = true;
        cr.detail = "valid annotation over " + std::to_string(rg.nodes.size()) +
                    " run-graph nodes, maximum value " + std::to_string(max_val);
      } else {
        cr.passed = false;
        cr.witness = counterexample_lasso(rg);
        cr.detail = "rejecting cycle: stem " + letters_text(cr.witness->first) + " loop " +
                    letters_text(cr.witness->second);
      }
    } catch (const ResourceError& e) {
      cr.passed = false;
      cr.detail = std::string("resource limit: ") + e.what();
    }
    report.checks.push_back(std::move(cr));
  }

  // 3. local strategies are total exactly on prediction-consistent inputs
  for (size_t i = 0; i < n; ++i) {
    if (!solution[i].local_strategy) continue;
    CheckResult cr;
    cr.name = "local_totality(" + arch.processes[i].name + ")";
    cr.passed = true;
    const Machine& m = *solution[i].local_strategy;
    for (size_t t = 0; t < m.states.size() && cr.passed; ++t) {
      for (uint32_t c = 0; c < m.cube_count() && cr.passed; ++c) {
        Letter in = m.cube_to_letter(c);
        Letter predicted = m.label_letter(static_cast<int>(t), c);
        const auto cut = [&](Letter l) {
          Letter r;
          for (const auto& v : m.assoc_outputs)
            if (l.count(v)) r.insert(v);
          return r;
        };
        const bool valid = cut(in) == cut(predicted);
        const bool defined = m.states[t].succ[c] >= 0;
        if (valid != defined) {
          cr.passed = false;
          cr.detail = "state " + m.states[t].name + ", input " + letters_text({in}) +
                      (defined ? ": transition on a prediction-inconsistent input"
                               : ": missing transition on a prediction-consistent input");
        }
      }
    }
    if (cr.passed) cr.detail = "transition domain matches the predictions";
    report.checks.push_back(std::move(cr));
  }

  // 4. informational: does every process see the variables of its subspec?
  {
    const Decomposition dec = decompose(spec, arch);
    for (size_t i = 0; i < n; ++i) {
      CheckResult cr;
      cr.name = "subspec_variables_visible(" + arch.processes[i].name + ")";
      cr.informational = true;
      cr.passed = true;
      const auto& p = arch.processes[i];
      std::set<std::string> visible(p.inputs.begin(), p.inputs.end());
      visible.insert(p.outputs.begin(), p.outputs.end());
      std::set<std::string> missing;
      for (const auto& conj : dec.subspecs[i].conjuncts)
        for (const auto& atom : atomic_props(conj))
          if (!visible.count(atom)) missing.insert(atom);
      if (!missing.empty()) {
        cr.passed = false;
        cr.detail = "subspecification mentions unobservable variables:";
        for (const auto& v : missing) cr.detail += " " + v;
        cr.detail += " (synthesis stays sound but may miss solutions)";
      } else {
        cr.detail = "all subspecification variables are visible";
      }
      report.checks.push_back(std::move(cr));
    }
  }

  return report;
}

}  // namespace certsynt
