#pragma once

#include <string>
#include <utility>
#include <vector>

#include "certsynt/cnf.hpp"
#include "certsynt/encoding.hpp"
#include "certsynt/machine.hpp"

namespace certsynt {

/// Where to send CNF instances. The embedded solver is the default and keeps
/// everything in-process; an external solver is any executable taking a
/// DIMACS file as its single argument and answering on stdout with an
/// "s SATISFIABLE" / "s UNSATISFIABLE" line plus "v" model lines.
struct SolverBackend {
  enum class Kind { Embedded, External };
  Kind kind = Kind::Embedded;
  std::string path;          // external only
  double timeout_sec = 0.0;  // 0 = no limit
  std::string work_dir = "."; // external only: where DIMACS files are written

  static SolverBackend embedded(double timeout_sec = 0.0);
  static SolverBackend external(std::string path, double timeout_sec = 0.0,
                                std::string work_dir = ".");
};

enum class SolveStatus { Sat, Unsat, Unknown };

struct Model {
  std::vector<bool> value;  // index 1..num_vars; [0] unused
  bool operator[](int var) const { return value[static_cast<size_t>(var)]; }
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  Model model;        // meaningful iff status == Sat
  std::string info;   // diagnostic detail for Unknown
};

/// Solves the instance on the chosen backend. A SAT model is re-evaluated
/// against every clause before it is returned; an external solver whose model
/// fails that check is reported as malformed output (InvalidInput). Timeouts
/// and unparsable answers yield Unknown, launch failures IoError.
SolveResult solve(const CnfInstance& cnf, const SolverBackend& backend);

/// Strategy/certificate pair of one process read back from a model.
struct ProcessMachines {
  Machine local_strategy;  // partial; labels carry associated-output predictions
  Machine certificate;     // total, deterministic
};

/// Decodes every process's machines from a satisfying model. The model must
/// be consistent with the encoding invariants (exactly one certificate
/// successor, at most one strategy successor per state and input); violations
/// indicate an encoder/solver bug and throw std::logic_error.
std::vector<ProcessMachines> decode(const Model& model, const EncodingLayout& layout,
                                    const VariableRegistry& registry);

}  // namespace certsynt
