#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "certsynt/architecture.hpp"
#include "certsynt/automata.hpp"
#include "certsynt/ltl.hpp"
#include "certsynt/machine.hpp"

namespace certsynt {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool informational = false;  // does not affect the verdict
  std::string detail;
  std::optional<std::pair<Trace, Trace>> witness;  // lasso for failed check 2
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  /// True iff every non-informational check passed.
  bool accepted() const;
};

/// One synthesized process as fed to the verifier. The local strategy is
/// optional (solutions built by hand may not have one); the totality audit is
/// skipped without it.
struct ProcessSolution {
  std::string name;
  Machine strategy;     // complete strategy over (I_i, O_i)
  Machine certificate;  // guarantee machine over (I_i, O^g_i)
  std::optional<Machine> local_strategy;
};

/// Independent checks of a candidate solution:
///  1. every certificate simulates its strategy on the guarantee outputs,
///  2. the run graph of the parallel composition against the UCA of the full
///     specification has a valid annotation (a counterexample lasso is
///     attached otherwise),
///  3. local strategies define a transition exactly where the input's
///     associated-output part matches the state's predictions,
///  4. (informational) whether every subspecification only mentions variables
///     its process can see; when violated, bounded synthesis stays sound but
///     may miss solutions.
VerificationReport verify_solution(const Architecture& arch, const ConjunctiveSpec& spec,
                                   const std::vector<ProcessSolution>& solution,
                                   const std::vector<std::set<int>>& relevant);

}  // namespace certsynt
