#include "certsynt/synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

namespace certsynt {

std::vector<std::pair<int, int>> bound_schedule(int max_strategy, int max_cert,
                                                SchedulePolicy policy) {
  if (max_strategy < 1 || max_cert < 1)
    throw InvalidInput("bound_schedule: maxima must be at least 1");
  std::vector<std::pair<int, int>> out;
  for (int s = 1; s <= max_strategy; ++s)
    for (int c = 1; c <= max_cert; ++c) out.push_back({s, c});
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    const int sa = a.first + a.second, sb = b.first + b.second;
    if (sa != sb) return sa < sb;
    return policy == SchedulePolicy::CertificateFirst ? a.first < b.first
                                                      : a.second < b.second;
  });
  return out;
}

namespace {

double ms_since(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - from)
      .count();
}

}  // namespace

SynthesisOutcome synthesize(const Architecture& arch, const ConjunctiveSpec& spec,
                            int max_strategy, int max_cert, const SynthesisOptions& opts) {
  SynthesisOutcome outcome;
  outcome.max_bounds = {max_strategy, max_cert};

  const ValidationResult val = validate(arch);
  if (!val.ok()) {
    std::string msg = "invalid architecture:";
    for (const auto& e : val.errors) msg += "\n  " + e;
    throw InvalidInput(msg);
  }
  outcome.warnings = val.warnings;

  const Decomposition dec = decompose(spec, arch);
  const std::vector<std::set<int>> relevant = relevant_processes(dec, arch);
  const GuaranteeAlphabet ga = guarantee_alphabet(arch, relevant);

  // Automata are independent of the bounds; translate each subspecification
  // once up front.
  std::vector<UniversalCoBuchi> ucas;
  for (size_t j = 0; j < arch.processes.size(); ++j) {
    const auto& p = arch.processes[j];
    std::set<std::string> alphabet(p.inputs.begin(), p.inputs.end());
    alphabet.insert(p.outputs.begin(), p.outputs.end());
    const FormulaPtr phi = dec.subspecs[j].conjunction();
    std::set<std::string> missing;
    for (const auto& atom : atomic_props(phi))
      if (!alphabet.count(atom)) missing.insert(atom);
    if (!missing.empty()) {
      std::string w = "process " + p.name + " cannot observe";
      for (const auto& v : missing) w += " " + v;
      w += "; its subspecification exceeds its interface, so the search may miss solutions";
      outcome.warnings.push_back(std::move(w));
    }
    ucas.push_back(ltl_to_uca(phi, alphabet, opts.automaton_cap));
  }

  if (!opts.emit_dimacs_dir.empty())
    std::filesystem::create_directories(opts.emit_dimacs_dir);

  for (const auto& [s, c] : bound_schedule(max_strategy, max_cert, opts.policy)) {
    ++outcome.stats.iterations;
    const auto t_encode = std::chrono::steady_clock::now();
    EncodedProblem problem =
        encode(arch, dec, relevant, ga, ucas,
               Bounds::uniform(static_cast<int>(arch.processes.size()), s, c), opts.mode,
               opts.limits);
    outcome.stats.encode_ms += ms_since(t_encode);
    outcome.stats.last_vars = problem.cnf.num_vars;
    outcome.stats.last_clauses = static_cast<long long>(problem.cnf.clauses.size());

    if (!opts.emit_dimacs_dir.empty()) {
      const std::string base = opts.emit_dimacs_dir + "/instance_s" + std::to_string(s) +
                               "_c" + std::to_string(c);
      std::ofstream os(base + ".cnf");
      if (!os) throw IoError("cannot write " + base + ".cnf");
      to_dimacs(problem.cnf, os);
      std::ofstream vs(base + ".vars.json");
      if (!vs) throw IoError("cannot write " + base + ".vars.json");
      vs << registry_to_json(problem.cnf.registry);
    }

    const auto t_solve = std::chrono::steady_clock::now();
    const SolveResult res = solve(problem.cnf, opts.backend);
    outcome.stats.solve_ms += ms_since(t_solve);

    if (res.status == SolveStatus::Unknown) {
      outcome.status = SynthStatus::Unknown;
      outcome.message = "solver gave no answer at bounds (" + std::to_string(s) + "," +
                        std::to_string(c) + "): " + res.info;
      return outcome;
    }
    if (res.status == SolveStatus::Unsat) continue;

    const std::vector<ProcessMachines> decoded =
        decode(res.model, problem.layout, problem.cnf.registry);
    Solution sol;
    sol.bounds = {s, c};
    std::vector<ProcessSolution> for_verifier;
    for (size_t j = 0; j < decoded.size(); ++j) {
      PerProcessResult r;
      r.name = arch.processes[j].name;
      r.local_strategy = decoded[j].local_strategy;
      r.certificate = decoded[j].certificate;
      r.strategy = extend_strategy(decoded[j].local_strategy, decoded[j].certificate);
      for_verifier.push_back({r.name, r.strategy, r.certificate, r.local_strategy});
      sol.processes.push_back(std::move(r));
    }
    sol.report = verify_solution(arch, spec, for_verifier, relevant);
    if (!sol.report.accepted()) {
      std::string msg = "verification rejected a decoded solution:";
      for (const auto& chk : sol.report.checks)
        if (!chk.passed && !chk.informational) msg += "\n  " + chk.name + ": " + chk.detail;
      throw std::logic_error(msg);
    }
    sol.stats = outcome.stats;
    outcome.status = SynthStatus::Realizable;
    outcome.solution = std::move(sol);
    return outcome;
  }

  outcome.status = SynthStatus::UnrealizableUpTo;
  outcome.message = "no solution up to strategy bound " + std::to_string(max_strategy) +
                    " and certificate bound " + std::to_string(max_cert);
  return outcome;
}

}  // namespace certsynt
