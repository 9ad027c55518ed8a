#include "certsynt/json_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "certsynt/common.hpp"

namespace certsynt {

using nlohmann::json;

namespace {

json letter_to_json(const Letter& l) {
  json a = json::array();
  for (const auto& v : l) a.push_back(v);
  return a;
}

json trace_to_json(const Trace& t) {
  json a = json::array();
  for (const auto& l : t) a.push_back(letter_to_json(l));
  return a;
}

std::vector<std::string> string_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidInput(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw InvalidInput(what + " must contain only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw InvalidInput("malformed JSON in " + what);
  return j;
}

const json& field(const json& j, const std::string& key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(what + " is missing the \"" + key + "\" field");
  return *it;
}

}  // namespace

SpecFile spec_from_json_text(const std::string& text) {
  json j = parse_json(text, "specification file");
  if (!j.is_object()) throw InvalidInput("specification file must be a JSON object");

  SpecFile spec;
  const json& procs = field(j, "processes", "specification file");
  if (!procs.is_array()) throw InvalidInput("\"processes\" must be an array");
  for (const auto& p : procs) {
    if (!p.is_object()) throw InvalidInput("each process must be a JSON object");
    const json& jname = field(p, "name", "process");
    if (!jname.is_string()) throw InvalidInput("process \"name\" must be a string");
    spec.arch.processes.push_back(make_process(
        jname.get<std::string>(),
        string_list(field(p, "inputs", "process"), "process \"inputs\""),
        string_list(field(p, "outputs", "process"), "process \"outputs\"")));
  }
  spec.arch = make_architecture(
      std::move(spec.arch.processes),
      string_list(field(j, "env_outputs", "specification file"), "\"env_outputs\""));

  ValidationResult vr = validate(spec.arch);
  if (!vr.ok()) {
    std::string msg = "invalid architecture:";
    for (const auto& e : vr.errors) msg += "\n  " + e;
    throw InvalidInput(msg);
  }

  spec.conjunct_texts =
      string_list(field(j, "conjuncts", "specification file"), "\"conjuncts\"");
  spec.parse_conjuncts();  // surfaces syntax errors at load time
  return spec;
}

std::string spec_to_json_text(const SpecFile& spec) {
  json j;
  j["processes"] = json::array();
  for (const auto& p : spec.arch.processes) {
    json jp;
    jp["name"] = p.name;
    jp["inputs"] = p.inputs;
    jp["outputs"] = p.outputs;
    j["processes"].push_back(std::move(jp));
  }
  j["env_outputs"] = spec.arch.env_outputs;
  j["conjuncts"] = spec.conjunct_texts;
  return j.dump(2) + "\n";
}

SpecFile load_spec_file(const std::string& path) {
  return spec_from_json_text(read_text_file(path));
}

void save_spec_file(const SpecFile& spec, const std::string& path) {
  write_text_file(path, spec_to_json_text(spec));
}

std::string machine_to_json_text(const Machine& m) {
  json j;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["assoc_outputs"] = m.assoc_outputs;
  j["mealy"] = m.mealy;
  j["initial"] = m.initial;
  j["states"] = json::array();
  for (const auto& st : m.states) {
    json js;
    js["name"] = st.name;
    if (!m.mealy) js["label"] = letter_to_json(m.mask_to_letter(st.label));
    json trans = json::array();
    for (uint32_t c = 0; c < m.cube_count(); ++c) {
      int to = st.succ[c];
      if (!m.mealy && to < 0) continue;  // Moore files list defined cubes only
      json jt;
      jt["input"] = letter_to_json(m.cube_to_letter(c));
      if (m.mealy) {
        jt["output"] = letter_to_json(m.mask_to_letter(st.out[c]));
        jt["to"] = to < 0 ? json(nullptr) : json(to);
      } else {
        jt["to"] = to;
      }
      trans.push_back(std::move(jt));
    }
    js["transitions"] = std::move(trans);
    j["states"].push_back(std::move(js));
  }
  return j.dump(2) + "\n";
}

Machine machine_from_json_text(const std::string& text) {
  json j = parse_json(text, "machine file");
  if (!j.is_object()) throw InvalidInput("machine file must be a JSON object");

  Machine m;
  m.inputs = string_list(field(j, "inputs", "machine file"), "\"inputs\"");
  m.outputs = string_list(field(j, "outputs", "machine file"), "\"outputs\"");
  if (j.contains("assoc_outputs"))
    m.assoc_outputs = string_list(j.at("assoc_outputs"), "\"assoc_outputs\"");
  if (m.inputs.size() > 20) throw InvalidInput("machine has too many inputs");
  std::set<std::string> out_set(m.outputs.begin(), m.outputs.end());
  for (const auto& v : m.assoc_outputs)
    if (!out_set.count(v))
      throw InvalidInput("assoc output \"" + v + "\" is not an output of the machine");
  if (j.contains("mealy")) {
    if (!j.at("mealy").is_boolean()) throw InvalidInput("\"mealy\" must be a boolean");
    m.mealy = j.at("mealy").get<bool>();
  }

  const json& states = field(j, "states", "machine file");
  if (!states.is_array() || states.empty())
    throw InvalidInput("\"states\" must be a non-empty array");

  std::set<std::string> input_set(m.inputs.begin(), m.inputs.end());
  int n = static_cast<int>(states.size());
  for (const auto& js : states) {
    if (!js.is_object()) throw InvalidInput("each state must be a JSON object");
    const json& jname = field(js, "name", "state");
    if (!jname.is_string()) throw InvalidInput("state \"name\" must be a string");
    auto& st = m.add_state(jname.get<std::string>());
    if (!m.mealy) {
      Letter label;
      for (const auto& v : string_list(field(js, "label", "state"), "state \"label\""))
        label.insert(v);
      for (const auto& v : label)
        if (!out_set.count(v))
          throw InvalidInput("label variable \"" + v + "\" is not an output");
      st.label = m.output_mask(label);
    }
    const json& trans = field(js, "transitions", "state");
    if (!trans.is_array()) throw InvalidInput("state \"transitions\" must be an array");
    std::vector<bool> seen(m.cube_count(), false);
    for (const auto& jt : trans) {
      if (!jt.is_object()) throw InvalidInput("each transition must be a JSON object");
      Letter in;
      for (const auto& v :
           string_list(field(jt, "input", "transition"), "transition \"input\""))
        in.insert(v);
      for (const auto& v : in)
        if (!input_set.count(v))
          throw InvalidInput("transition input \"" + v + "\" is not an input");
      uint32_t cube = m.letter_to_cube(in);
      if (seen[cube])
        throw InvalidInput("duplicate transition for one input letter in state \"" +
                           st.name + "\"");
      seen[cube] = true;
      const json& jto = field(jt, "to", "transition");
      int to = -1;
      if (jto.is_number_integer())
        to = jto.get<int>();
      else if (!(m.mealy && jto.is_null()))
        throw InvalidInput("transition \"to\" must be a state index" +
                           std::string(m.mealy ? " or null" : ""));
      if (to >= n || (to < 0 && !m.mealy) || to < -1)
        throw InvalidInput("transition target out of range in state \"" + st.name + "\"");
      st.succ[cube] = to;
      if (m.mealy) {
        Letter outl;
        for (const auto& v :
             string_list(field(jt, "output", "transition"), "transition \"output\""))
          outl.insert(v);
        for (const auto& v : outl)
          if (!out_set.count(v))
            throw InvalidInput("output variable \"" + v + "\" is not an output");
        st.out[cube] = m.output_mask(outl);
      }
    }
    if (m.mealy)
      for (uint32_t c = 0; c < m.cube_count(); ++c)
        if (!seen[c])
          throw InvalidInput("mealy state \"" + st.name +
                             "\" must list every input letter");
  }

  const json& jinit = field(j, "initial", "machine file");
  if (!jinit.is_number_integer()) throw InvalidInput("\"initial\" must be an integer");
  m.initial = jinit.get<int>();
  if (m.initial < 0 || m.initial >= n) throw InvalidInput("\"initial\" is out of range");
  return m;
}

Machine load_machine_file(const std::string& path) {
  return machine_from_json_text(read_text_file(path));
}

void save_machine_file(const Machine& m, const std::string& path) {
  write_text_file(path, machine_to_json_text(m));
}

namespace {

std::string letter_text(const Letter& l) {
  std::string s = "{";
  bool first = true;
  for (const auto& v : l) {
    if (!first) s += ",";
    s += v;
    first = false;
  }
  return s + "}";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string machine_to_dot(const Machine& m, const std::string& title) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(title) << "\" {\n";
  os << "  rankdir=LR;\n";
  os << "  __init [shape=point];\n";
  for (size_t s = 0; s < m.states.size(); ++s) {
    os << "  s" << s << " [shape=circle, label=\"" << dot_escape(m.states[s].name);
    if (!m.mealy) os << "\\n" << dot_escape(letter_text(m.mask_to_letter(m.states[s].label)));
    os << "\"];\n";
  }
  os << "  __init -> s" << m.initial << ";\n";
  for (size_t s = 0; s < m.states.size(); ++s) {
    for (uint32_t c = 0; c < m.cube_count(); ++c) {
      int to = m.states[s].succ[c];
      if (to < 0) continue;
      os << "  s" << s << " -> s" << to << " [label=\""
         << dot_escape(letter_text(m.cube_to_letter(c)));
      if (m.mealy)
        os << " / " << dot_escape(letter_text(m.mask_to_letter(m.states[s].out[c])));
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string report_to_json_text(const VerificationReport& report) {
  json j;
  j["realizable"] = report.accepted();
  j["checks"] = json::array();
  for (const auto& c : report.checks) {
    json jc;
    jc["name"] = c.name;
    jc["status"] = c.passed ? "passed" : "failed";
    jc["informational"] = c.informational;
    jc["detail"] = c.detail;
    if (c.witness) {
      json w;
      w["stem"] = trace_to_json(c.witness->first);
      w["loop"] = trace_to_json(c.witness->second);
      jc["witness"] = std::move(w);
    }
    j["checks"].push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("read failure on file: " + path);
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failure on file: " + path);
}

}  // namespace certsynt
