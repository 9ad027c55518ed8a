#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "certsynt/common.hpp"

namespace certsynt {

/// Bijection between semantic variable names and 1-based DIMACS indices.
/// Indices are handed out in first-lookup order, which the encoder keeps
/// deterministic; every literal of an instance traces back to a named
/// variable (encoding variables and Tseitin auxiliaries alike).
class VariableRegistry {
 public:
  int lookup_or_add(const std::string& name);
  /// 0 if the name is unknown.
  int find(const std::string& name) const;
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name_of(int var) const { return names_.at(var - 1); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> names_;
};

struct CnfInstance {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  VariableRegistry registry;

  void add_clause(std::vector<int> lits);
};

/// Serializes in DIMACS CNF format; byte-identical output for equal instances.
void to_dimacs(const CnfInstance& cnf, std::ostream& os);
std::string to_dimacs_string(const CnfInstance& cnf);

/// Parses a DIMACS file (comments allowed); used for round-trip checks and by
/// the external-backend plumbing. Throws InvalidInput on malformed input.
struct ParsedDimacs {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};
ParsedDimacs parse_dimacs(std::istream& is);

/// JSON sidecar mapping every variable name to its DIMACS index.
std::string registry_to_json(const VariableRegistry& reg);

}  // namespace certsynt
