#include "certsynt/cnf.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace certsynt {

int VariableRegistry::lookup_or_add(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  names_.push_back(name);
  const int var = static_cast<int>(names_.size());
  index_.emplace(name, var);
  return var;
}

int VariableRegistry::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? 0 : it->second;
}

void CnfInstance::add_clause(std::vector<int> lits) {
  for (int l : lits) {
    const int v = std::abs(l);
    if (v == 0 || v > num_vars)
      throw InvalidInput("clause literal " + std::to_string(l) + " out of range");
  }
  clauses.push_back(std::move(lits));
}

void to_dimacs(const CnfInstance& cnf, std::ostream& os) {
  os << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
  for (const auto& clause : cnf.clauses) {
    for (int l : clause) os << l << " ";
    os << "0\n";
  }
}

std::string to_dimacs_string(const CnfInstance& cnf) {
  std::ostringstream os;
  to_dimacs(cnf, os);
  return os.str();
}

ParsedDimacs parse_dimacs(std::istream& is) {
  ParsedDimacs out;
  bool have_header = false;
  long declared_clauses = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      if (!(ls >> p >> fmt >> out.num_vars >> declared_clauses) || fmt != "cnf")
        throw InvalidInput("malformed DIMACS header: " + line);
      if (out.num_vars < 0 || declared_clauses < 0)
        throw InvalidInput("malformed DIMACS header: " + line);
      have_header = true;
      continue;
    }
    if (!have_header) throw InvalidInput("DIMACS clause before header");
    std::vector<int> clause;
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        out.clauses.push_back(clause);
        clause.clear();
        continue;
      }
      if (std::abs(lit) > out.num_vars)
        throw InvalidInput("DIMACS literal out of range: " + std::to_string(lit));
      clause.push_back(lit);
    }
    if (!ls.eof()) throw InvalidInput("malformed DIMACS clause line: " + line);
    if (!clause.empty())
      throw InvalidInput("DIMACS clause not terminated by 0: " + line);
  }
  if (!have_header) throw InvalidInput("missing DIMACS header");
  if (static_cast<long>(out.clauses.size()) != declared_clauses)
    throw InvalidInput("DIMACS clause count mismatch: header declares " +
                       std::to_string(declared_clauses) + ", found " +
                       std::to_string(out.clauses.size()));
  return out;
}

std::string registry_to_json(const VariableRegistry& reg) {
  nlohmann::json j = nlohmann::json::object();
  for (int v = 1; v <= reg.size(); ++v) j[reg.name_of(v)] = v;
  return j.dump(2) + "\n";
}

}  // namespace certsynt
