#pragma once

#include "certsynt/solver.hpp"

namespace certsynt::internal {

/// In-process CDCL solver; deterministic for a fixed instance apart from the
/// wall-clock timeout, which can only turn an answer into Unknown.
SolveResult solve_embedded(const CnfInstance& cnf, double timeout_sec);

/// Runs an external solver executable on a DIMACS dump of the instance.
SolveResult solve_external(const CnfInstance& cnf, const std::string& path, double timeout_sec,
                           const std::string& work_dir);

}  // namespace certsynt::internal
