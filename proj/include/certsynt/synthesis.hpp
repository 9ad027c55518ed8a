#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "certsynt/architecture.hpp"
#include "certsynt/encoding.hpp"
#include "certsynt/ltl.hpp"
#include "certsynt/solver.hpp"
#include "certsynt/verification.hpp"

namespace certsynt {

enum class SchedulePolicy { CertificateFirst, StrategyFirst };

/// All uniform bound pairs up to the maxima, ordered by increasing total size.
/// Ties are broken certificate-first by default: for equal sums the pair with
/// the larger certificate (smaller strategy) is tried first, e.g. up to (2,2)
/// the order is (1,1), (1,2), (2,1), (2,2).
std::vector<std::pair<int, int>> bound_schedule(int max_strategy, int max_cert,
                                                SchedulePolicy policy =
                                                    SchedulePolicy::CertificateFirst);

struct SynthesisStats {
  int iterations = 0;
  long long last_vars = 0;
  long long last_clauses = 0;
  double encode_ms = 0.0;
  double solve_ms = 0.0;
};

struct PerProcessResult {
  std::string name;
  Machine strategy;        // total, extension of the local strategy
  Machine local_strategy;  // as decoded; partial
  Machine certificate;
};

struct Solution {
  std::vector<PerProcessResult> processes;
  std::pair<int, int> bounds;  // uniform bounds at which the instance was SAT
  SynthesisStats stats;
  VerificationReport report;
};

enum class SynthStatus { Realizable, UnrealizableUpTo, Unknown };

struct SynthesisOutcome {
  SynthStatus status = SynthStatus::Unknown;
  std::optional<Solution> solution;       // Realizable only
  std::pair<int, int> max_bounds{0, 0};
  std::vector<std::string> warnings;      // e.g. completeness side condition
  std::string message;                    // diagnostic for Unknown
  SynthesisStats stats;
};

struct SynthesisOptions {
  SemanticsMode mode = SemanticsMode::Moore;
  SchedulePolicy policy = SchedulePolicy::CertificateFirst;
  SolverBackend backend = SolverBackend::embedded();
  std::string emit_dimacs_dir;  // when set, every instance + registry sidecar
  int automaton_cap = kDefaultAutomatonCap;
  EncoderLimits limits{};
};

/// Iterates the bound schedule, encoding and solving each instance. The
/// automata are translated once and reused across bounds. On SAT the model is
/// decoded, every local strategy is extended with its certificate, and the
/// result is verified; only verifier-approved solutions are returned (a
/// failing verification at this point is a soundness bug and throws
/// std::logic_error). Unknown from the solver aborts the search.
SynthesisOutcome synthesize(const Architecture& arch, const ConjunctiveSpec& spec,
                            int max_strategy, int max_cert,
                            const SynthesisOptions& opts = {});

}  // namespace certsynt
