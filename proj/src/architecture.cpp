#include "certsynt/architecture.hpp"

#include <algorithm>
#include <cctype>

namespace certsynt {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  // Single capital letters X/U/F/G are LTL operators and can never be atoms.
  if (s == "X" || s == "U" || s == "F" || s == "G") return false;
  return !(s == "true" || s == "false");
}

template <typename A, typename B>
std::vector<std::string> intersect(const A& a, const B& b) {
  std::vector<std::string> out;
  for (const auto& x : a)
    if (std::count(b.begin(), b.end(), x)) out.push_back(x);
  return out;
}

}  // namespace

int Architecture::index_of(const std::string& name) const {
  for (size_t i = 0; i < processes.size(); ++i)
    if (processes[i].name == name) return static_cast<int>(i);
  return -1;
}

std::set<std::string> Architecture::inputs_union() const {
  std::set<std::string> s;
  for (const auto& p : processes) s.insert(p.inputs.begin(), p.inputs.end());
  return s;
}

std::set<std::string> Architecture::outputs_union() const {
  std::set<std::string> s;
  for (const auto& p : processes) s.insert(p.outputs.begin(), p.outputs.end());
  return s;
}

std::set<std::string> Architecture::all_variables() const {
  std::set<std::string> s = inputs_union();
  for (const auto& p : processes) s.insert(p.outputs.begin(), p.outputs.end());
  return s;
}

Process make_process(std::string name, std::vector<std::string> inputs,
                     std::vector<std::string> outputs) {
  return Process{std::move(name), sorted_unique(std::move(inputs)),
                 sorted_unique(std::move(outputs))};
}

Architecture make_architecture(std::vector<Process> processes,
                               std::vector<std::string> env_outputs) {
  Architecture a;
  a.processes = std::move(processes);
  a.env_outputs = sorted_unique(std::move(env_outputs));
  return a;
}

ValidationResult validate(const Architecture& arch) {
  ValidationResult res;
  auto err = [&res](std::string m) { res.errors.push_back(std::move(m)); };

  std::set<std::string> names;
  for (const auto& p : arch.processes) {
    if (!is_identifier(p.name)) err("process name '" + p.name + "' is not an identifier");
    if (!names.insert(p.name).second) err("duplicate process name '" + p.name + "'");
    for (const auto& v : p.inputs)
      if (!is_identifier(v)) err("input '" + v + "' of " + p.name + " is not an identifier");
    for (const auto& v : p.outputs)
      if (!is_identifier(v)) err("output '" + v + "' of " + p.name + " is not an identifier");
    for (const auto& v : intersect(p.inputs, p.outputs))
      err("variable '" + v + "' is both input and output of " + p.name);
  }
  for (const auto& v : arch.env_outputs)
    if (!is_identifier(v)) err("environment output '" + v + "' is not an identifier");

  for (size_t i = 0; i < arch.processes.size(); ++i) {
    for (size_t j = i + 1; j < arch.processes.size(); ++j) {
      for (const auto& v : intersect(arch.processes[i].outputs, arch.processes[j].outputs))
        err("variable '" + v + "' is output of both " + arch.processes[i].name + " and " +
            arch.processes[j].name);
    }
    for (const auto& v : intersect(arch.processes[i].outputs, arch.env_outputs))
      err("variable '" + v + "' is output of both " + arch.processes[i].name +
          " and the environment");
  }

  const auto out = arch.outputs_union();
  const auto inp = arch.inputs_union();
  for (const auto& p : arch.processes) {
    for (const auto& v : p.inputs) {
      if (!out.count(v) && !std::count(arch.env_outputs.begin(), arch.env_outputs.end(), v))
        err("input '" + v + "' of " + p.name + " is produced by no process or environment");
    }
  }
  for (const auto& v : arch.env_outputs) {
    if (!inp.count(v))
      err("environment output '" + v + "' is read by no process");
  }

  if (arch.processes.size() < 2)
    res.warnings.push_back("fewer than two system processes: degenerates to monolithic synthesis");
  return res;
}

GuaranteeAlphabet guarantee_alphabet(const Architecture& arch,
                                     const std::vector<std::set<int>>& relevant) {
  const auto inp = arch.inputs_union();
  const size_t n = arch.processes.size();
  GuaranteeAlphabet ga;
  ga.guarantee_outputs.resize(n);
  ga.guarantee_vars.resize(n);
  ga.associated_outputs.resize(n);
  for (size_t i = 0; i < n; ++i) {
    for (const auto& o : arch.processes[i].outputs)
      if (inp.count(o)) ga.guarantee_outputs[i].push_back(o);
    ga.guarantee_vars[i] = arch.processes[i].inputs;
    ga.guarantee_vars[i].insert(ga.guarantee_vars[i].end(), ga.guarantee_outputs[i].begin(),
                                ga.guarantee_outputs[i].end());
    std::sort(ga.guarantee_vars[i].begin(), ga.guarantee_vars[i].end());
  }
  for (size_t i = 0; i < n; ++i) {
    std::set<std::string> assoc;
    for (int k : relevant[i]) {
      for (const auto& o : ga.guarantee_outputs[k])
        if (std::count(arch.processes[i].inputs.begin(), arch.processes[i].inputs.end(), o))
          assoc.insert(o);
    }
    ga.associated_outputs[i].assign(assoc.begin(), assoc.end());
  }
  return ga;
}

}  // namespace certsynt
