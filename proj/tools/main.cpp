#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "certsynt/bench.hpp"
#include "certsynt/common.hpp"
#include "certsynt/json_io.hpp"
#include "certsynt/synthesis.hpp"
#include "certsynt/verification.hpp"

namespace {

using namespace certsynt;

constexpr int kExitRealizable = 0;
constexpr int kExitUnrealizable = 1;
constexpr int kExitError = 2;
constexpr int kExitVerifyFailed = 3;
constexpr int kExitUnknown = 4;

struct SynthFlags {
  std::string spec_path;
  int max_strategy = 0;
  int max_cert = 0;
  std::string mode = "moore";
  std::string solver = "builtin";
  std::string emit_dimacs;
  std::string out_dir;
  std::string format = "json";
  double timeout_sec = 0.0;
};

void add_synth_options(CLI::App* cmd, SynthFlags& flags, bool spec_required) {
  if (spec_required)
    cmd->add_option("--spec", flags.spec_path, "specification file (JSON)")->required();
  cmd->add_option("--max-strategy", flags.max_strategy, "maximum strategy states")
      ->required();
  cmd->add_option("--max-cert", flags.max_cert, "maximum certificate states")->required();
  cmd->add_option("--mode", flags.mode, "semantics: moore or mealy")
      ->check(CLI::IsMember({"moore", "mealy"}));
  cmd->add_option("--solver", flags.solver,
                  "builtin, or path to an external DIMACS solver");
  cmd->add_option("--emit-dimacs", flags.emit_dimacs,
                  "directory for DIMACS instances and variable maps");
  cmd->add_option("--out", flags.out_dir, "output directory for machines and report")
      ->required();
  cmd->add_option("--format", flags.format, "machine file format")
      ->check(CLI::IsMember({"json", "dot", "both"}));
  cmd->add_option("--timeout", flags.timeout_sec, "solver timeout in seconds (0 = none)");
}

SynthesisOptions make_options(const SynthFlags& flags) {
  SynthesisOptions opts;
  opts.mode = flags.mode == "mealy" ? SemanticsMode::Mealy : SemanticsMode::Moore;
  if (flags.solver == "builtin") {
    opts.backend = SolverBackend::embedded(flags.timeout_sec);
  } else {
    std::string work = flags.out_dir.empty() ? std::string(".") : flags.out_dir;
    opts.backend = SolverBackend::external(flags.solver, flags.timeout_sec, work);
  }
  opts.emit_dimacs_dir = flags.emit_dimacs;
  return opts;
}

void write_machine_files(const Machine& m, const std::string& stem,
                         const std::string& format, const std::string& title) {
  if (format == "json" || format == "both") save_machine_file(m, stem + ".json");
  if (format == "dot" || format == "both")
    write_text_file(stem + ".dot", machine_to_dot(m, title));
}

int write_solution(const SpecFile& spec, const SynthesisOutcome& outcome,
                   const SynthFlags& flags) {
  for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
  if (outcome.status == SynthStatus::Unknown) {
    std::cerr << "solver result unknown: " << outcome.message << "\n";
    return kExitUnknown;
  }
  if (outcome.status == SynthStatus::UnrealizableUpTo) {
    std::cout << "unrealizable up to bounds (" << outcome.max_bounds.first << ","
              << outcome.max_bounds.second << ")\n";
    return kExitUnrealizable;
  }
  const Solution& sol = *outcome.solution;
  std::filesystem::create_directories(flags.out_dir);
  for (const auto& p : sol.processes) {
    std::string base = flags.out_dir + "/" + p.name;
    write_machine_files(p.strategy, base + "_strategy", flags.format,
                        p.name + " strategy");
    write_machine_files(p.certificate, base + "_certificate", flags.format,
                        p.name + " certificate");
  }
  write_text_file(flags.out_dir + "/report.json", report_to_json_text(sol.report));
  (void)spec;
  std::cout << "realizable at bounds (" << sol.bounds.first << "," << sol.bounds.second
            << ")\n";
  for (const auto& p : sol.processes)
    std::cout << "  " << p.name << ": strategy " << p.strategy.states.size()
              << " states, certificate " << p.certificate.states.size() << " states\n";
  std::cout << "solution written to " << flags.out_dir << "\n";
  return kExitRealizable;
}

int cmd_synth(const SynthFlags& flags) {
  SpecFile spec = load_spec_file(flags.spec_path);
  SynthesisOutcome outcome = synthesize(spec.arch, spec.parse_conjuncts(),
                                        flags.max_strategy, flags.max_cert,
                                        make_options(flags));
  return write_solution(spec, outcome, flags);
}

int cmd_verify(const std::string& spec_path, const std::string& solution_dir) {
  SpecFile spec = load_spec_file(spec_path);
  std::vector<ProcessSolution> solution;
  for (const auto& p : spec.arch.processes) {
    ProcessSolution ps;
    ps.name = p.name;
    ps.strategy = load_machine_file(solution_dir + "/" + p.name + "_strategy.json");
    ps.certificate = load_machine_file(solution_dir + "/" + p.name + "_certificate.json");
    solution.push_back(std::move(ps));
  }
  ConjunctiveSpec conj = spec.parse_conjuncts();
  Decomposition dec = decompose(conj, spec.arch);
  auto relevant = relevant_processes(dec, spec.arch);
  VerificationReport report = verify_solution(spec.arch, conj, solution, relevant);
  std::cout << report_to_json_text(report);
  return report.accepted() ? kExitRealizable : kExitVerifyFailed;
}

int cmd_decompose(const std::string& spec_path) {
  SpecFile spec = load_spec_file(spec_path);
  ConjunctiveSpec conj = spec.parse_conjuncts();
  Decomposition dec = decompose(conj, spec.arch);
  auto relevant = relevant_processes(dec, spec.arch);
  nlohmann::json j;
  j["processes"] = nlohmann::json::array();
  for (size_t i = 0; i < spec.arch.processes.size(); ++i) {
    nlohmann::json jp;
    jp["name"] = spec.arch.processes[i].name;
    jp["conjuncts"] = nlohmann::json::array();
    for (const auto& c : dec.subspecs[i].conjuncts) jp["conjuncts"].push_back(to_string(c));
    jp["relevant"] = nlohmann::json::array();
    for (int r : relevant[i]) jp["relevant"].push_back(spec.arch.processes[r].name);
    j["processes"].push_back(std::move(jp));
  }
  std::cout << j.dump(2) << "\n";
  return kExitRealizable;
}

int cmd_bench(const std::string& family, const std::string& param, SynthFlags flags) {
  SpecFile spec = make_bench_spec(family, param);
  if (!flags.out_dir.empty()) {
    std::filesystem::create_directories(flags.out_dir);
    save_spec_file(spec, flags.out_dir + "/" + family + "_" + param + ".json");
  }
  auto start = std::chrono::steady_clock::now();
  SynthesisOutcome outcome = synthesize(spec.arch, spec.parse_conjuncts(),
                                        flags.max_strategy, flags.max_cert,
                                        make_options(flags));
  double total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  const SynthesisStats& stats =
      outcome.solution ? outcome.solution->stats : outcome.stats;
  std::string status = outcome.status == SynthStatus::Realizable     ? "realizable"
                       : outcome.status == SynthStatus::UnrealizableUpTo ? "unrealizable"
                                                                         : "unknown";
  std::pair<int, int> bounds =
      outcome.solution ? outcome.solution->bounds : outcome.max_bounds;
  std::cout << family << "\t" << param << "\t" << status << "\t(" << bounds.first << ","
            << bounds.second << ")\tvars=" << stats.last_vars
            << "\tclauses=" << stats.last_clauses << "\tencode_ms=" << stats.encode_ms
            << "\tsolve_ms=" << stats.solve_ms << "\ttotal_ms=" << total_ms << "\n";
  if (!flags.out_dir.empty() && outcome.status == SynthStatus::Realizable)
    return write_solution(spec, outcome, flags);
  for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
  if (outcome.status == SynthStatus::Unknown) {
    std::cerr << "solver result unknown: " << outcome.message << "\n";
    return kExitUnknown;
  }
  return outcome.status == SynthStatus::Realizable ? kExitRealizable : kExitUnrealizable;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certifying bounded synthesis for distributed reactive systems"};
  app.require_subcommand(1);

  SynthFlags synth_flags;
  CLI::App* synth = app.add_subcommand("synth", "synthesize strategies and certificates");
  add_synth_options(synth, synth_flags, /*spec_required=*/true);

  std::string verify_spec, verify_dir;
  CLI::App* verify = app.add_subcommand("verify", "verify a solution directory");
  verify->add_option("--spec", verify_spec, "specification file (JSON)")->required();
  verify->add_option("--solution", verify_dir, "directory with machine files")->required();

  std::string dec_spec;
  CLI::App* dec = app.add_subcommand("decompose", "print subspecifications as JSON");
  dec->add_option("--spec", dec_spec, "specification file (JSON)")->required();

  std::string bench_family, bench_param;
  SynthFlags bench_flags;
  bench_flags.max_strategy = 4;
  bench_flags.max_cert = 4;
  CLI::App* bench = app.add_subcommand("bench", "generate and run a benchmark instance");
  bench->add_option("--family", bench_family, "latch, shift, adder or robots")->required();
  bench->add_option("--param", bench_param, "size parameter (robots: n1,n2)")->required();
  bench->add_option("--max-strategy", bench_flags.max_strategy, "maximum strategy states");
  bench->add_option("--max-cert", bench_flags.max_cert, "maximum certificate states");
  bench->add_option("--mode", bench_flags.mode, "semantics: moore or mealy")
      ->check(CLI::IsMember({"moore", "mealy"}));
  bench->add_option("--solver", bench_flags.solver,
                    "builtin, or path to an external DIMACS solver");
  bench->add_option("--emit-dimacs", bench_flags.emit_dimacs,
                    "directory for DIMACS instances and variable maps");
  bench->add_option("--out", bench_flags.out_dir,
                    "directory for the generated spec and solution");
  bench->add_option("--format", bench_flags.format, "machine file format")
      ->check(CLI::IsMember({"json", "dot", "both"}));
  bench->add_option("--timeout", bench_flags.timeout_sec,
                    "solver timeout in seconds (0 = none)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_flags);
    if (verify->parsed()) return cmd_verify(verify_spec, verify_dir);
    if (dec->parsed()) return cmd_decompose(dec_spec);
    if (bench->parsed()) return cmd_bench(bench_family, bench_param, bench_flags);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitError;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitError;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
