#pragma once

#include <set>
#include <string>
#include <vector>

#include "certsynt/common.hpp"

namespace certsynt {

struct Process {
  std::string name;
  std::vector<std::string> inputs;   // sorted, unique
  std::vector<std::string> outputs;  // sorted, unique
};

/// A distributed architecture: the environment plus n system processes.
/// Variable sets are kept sorted so that every derived ordering (cube bits,
/// encoding variables) is deterministic.
struct Architecture {
  std::vector<Process> processes;
  std::vector<std::string> env_outputs;  // sorted, unique

  int index_of(const std::string& name) const;  // -1 if absent
  std::set<std::string> inputs_union() const;   // inp = union of all I_i
  std::set<std::string> outputs_union() const;  // out = union of all O_i
  std::set<std::string> all_variables() const;  // V = inp + out
};

/// Makes a Process with sorted, deduplicated variable lists.
Process make_process(std::string name, std::vector<std::string> inputs,
                     std::vector<std::string> outputs);
Architecture make_architecture(std::vector<Process> processes,
                               std::vector<std::string> env_outputs);

struct ValidationResult {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

/// Checks all architecture invariants and reports every violation:
///  - process names are unique, non-empty identifiers; variables are identifiers
///  - I_i and O_i are disjoint per process
///  - outputs are pairwise disjoint across processes and disjoint from the
///    environment outputs
///  - every input is produced by some process or by the environment
///  - every environment output is read by some process (an env variable no
///    process can see could never be constrained and is rejected)
/// Fewer than two system processes is legal but flagged as a warning: the
/// problem degenerates to monolithic synthesis.
ValidationResult validate(const Architecture& arch);

/// Guarantee interface of every process, derived from the architecture and
/// the relevant-process map:
///   guarantee_outputs[i] = O_i intersected with inp (outputs someone reads),
///   guarantee_vars[i]    = I_i + guarantee_outputs[i],
///   associated_outputs[i]= union over relevant j of guarantee_outputs[j]
///                          restricted to I_i (what process i can observe).
struct GuaranteeAlphabet {
  std::vector<std::vector<std::string>> guarantee_outputs;
  std::vector<std::vector<std::string>> guarantee_vars;
  std::vector<std::vector<std::string>> associated_outputs;
};

GuaranteeAlphabet guarantee_alphabet(const Architecture& arch,
                                     const std::vector<std::set<int>>& relevant);

}  // namespace certsynt
