#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "certsynt/architecture.hpp"
#include "certsynt/bench.hpp"
#include "certsynt/ltl.hpp"
#include "fixtures.hpp"

using namespace certsynt;

namespace {

Architecture robots_full() {
  return make_architecture(
      {make_process("r_1", fixtures::kInputsR1, {"go_1", "m_1"}),
       make_process("r_2", fixtures::kInputsR2, {"go_2", "m_2"})},
      {"at_crossing_1", "at_crossing_2"});
}

}  // namespace

TEST_CASE("make_process sorts and deduplicates") {
  Process p = make_process("p", {"b", "a", "b"}, {"z", "y"});
  CHECK(p.inputs == std::vector<std::string>{"a", "b"});
  CHECK(p.outputs == std::vector<std::string>{"y", "z"});
}

TEST_CASE("variable set helpers") {
  Architecture arch = robots_full();
  CHECK(arch.index_of("r_1") == 0);
  CHECK(arch.index_of("r_2") == 1);
  CHECK(arch.index_of("nope") == -1);
  CHECK(arch.inputs_union() == std::set<std::string>{"at_crossing_1", "at_crossing_2",
                                                     "go_1", "go_2"});
  CHECK(arch.outputs_union() == std::set<std::string>{"go_1", "go_2", "m_1", "m_2"});
  CHECK(arch.all_variables() == std::set<std::string>{"at_crossing_1", "at_crossing_2",
                                                      "go_1", "go_2", "m_1", "m_2"});
}

TEST_CASE("validate: the robots architecture is accepted") {
  ValidationResult r = validate(robots_full());
  CHECK(r.ok());
  CHECK(r.warnings.empty());
}

TEST_CASE("validate: overlapping outputs across processes") {
  Architecture arch = make_architecture(
      {make_process("a", {"i"}, {"g"}), make_process("b", {"i"}, {"g"})}, {"i"});
  ValidationResult r = validate(arch);
  CHECK(!r.ok());
}

TEST_CASE("validate: input/output overlap within one process") {
  Architecture arch = make_architecture(
      {make_process("a", {"x", "i"}, {"x"}), make_process("b", {"i", "x"}, {"y"})}, {"i"});
  CHECK(!validate(arch).ok());
}

TEST_CASE("validate: dangling input variables") {
  Architecture arch = make_architecture(
      {make_process("a", {"ghost"}, {"x"}), make_process("b", {"x"}, {"y"})}, {});
  CHECK(!validate(arch).ok());
}

TEST_CASE("validate: environment output nobody reads") {
  Architecture arch = make_architecture(
      {make_process("a", {"i"}, {"x"}), make_process("b", {"i", "x"}, {"y"})},
      {"i", "unread"});
  CHECK(!validate(arch).ok());
}

TEST_CASE("validate: env output colliding with a process output") {
  Architecture arch = make_architecture(
      {make_process("a", {"i"}, {"x"}), make_process("b", {"i", "x"}, {"y"})}, {"i", "x"});
  CHECK(!validate(arch).ok());
}

TEST_CASE("validate: malformed names") {
  Architecture arch = make_architecture({make_process("", {"i"}, {"x"}),
                                         make_process("b", {"i", "x"}, {"2bad"})},
                                        {"i"});
  ValidationResult r = validate(arch);
  CHECK(r.errors.size() >= 2);
}

TEST_CASE("validate: fewer than two processes is a warning, not an error") {
  Architecture arch = make_architecture({make_process("only", {"i"}, {"x"})}, {"i"});
  ValidationResult r = validate(arch);
  CHECK(r.ok());
  CHECK(!r.warnings.empty());
}

TEST_CASE("validate: several violations are all reported") {
  Architecture arch = make_architecture(
      {make_process("a", {"x", "i"}, {"x"}), make_process("b", {"ghost"}, {"x"})}, {"i"});
  ValidationResult r = validate(arch);
  CHECK(r.errors.size() >= 3);  // I/O overlap, duplicate output x, dangling ghost
}

TEST_CASE("guarantee_alphabet: robots") {
  Architecture arch = robots_full();
  ConjunctiveSpec spec =
      parse_spec({fixtures::kSafe, fixtures::kCross1, fixtures::kCross2});
  auto rel = relevant_processes(decompose(spec, arch), arch);
  GuaranteeAlphabet ga = guarantee_alphabet(arch, rel);
  CHECK(ga.guarantee_outputs[0] == std::vector<std::string>{"go_1"});
  CHECK(ga.guarantee_outputs[1] == std::vector<std::string>{"go_2"});
  CHECK(ga.guarantee_vars[0] ==
        std::vector<std::string>{"at_crossing_1", "at_crossing_2", "go_1", "go_2"});
  CHECK(ga.associated_outputs[0] == std::vector<std::string>{"go_2"});
  CHECK(ga.associated_outputs[1] == std::vector<std::string>{"go_1"});
}

TEST_CASE("guarantee_alphabet: disconnected processes have empty interfaces") {
  Architecture arch = make_architecture(
      {make_process("a", {"i1"}, {"x"}), make_process("b", {"i2"}, {"y"})}, {"i1", "i2"});
  auto rel = relevant_processes(decompose(parse_spec({"G x", "G y"}), arch), arch);
  GuaranteeAlphabet ga = guarantee_alphabet(arch, rel);
  CHECK(ga.guarantee_outputs[0].empty());
  CHECK(ga.guarantee_outputs[1].empty());
  CHECK(ga.associated_outputs[0].empty());
  CHECK(ga.associated_outputs[1].empty());
}

TEST_CASE("guarantee_alphabet: carry chain of the three-bit adder") {
  SpecFile spec = make_adder_spec(3);
  REQUIRE(validate(spec.arch).ok());
  Decomposition dec = decompose(spec.parse_conjuncts(), spec.arch);
  auto rel = relevant_processes(dec, spec.arch);
  CHECK(rel[0] == std::set<int>{1});
  CHECK(rel[1] == std::set<int>{0, 2});
  CHECK(rel[2] == std::set<int>{1});

  GuaranteeAlphabet ga = guarantee_alphabet(spec.arch, rel);
  CHECK(ga.guarantee_outputs[0] == std::vector<std::string>{"c_0"});
  CHECK(ga.guarantee_outputs[1] == std::vector<std::string>{"c_1"});
  CHECK(ga.guarantee_outputs[2].empty());
  CHECK(ga.associated_outputs[0].empty());  // p_1 cannot observe c_1
  CHECK(ga.associated_outputs[1] == std::vector<std::string>{"c_0"});
  CHECK(ga.associated_outputs[2] == std::vector<std::string>{"c_1"});
}

TEST_CASE("guarantee interface containment invariants") {
  Architecture arch = robots_full();
  auto rel = relevant_processes(
      decompose(parse_spec({fixtures::kSafe, fixtures::kCross1, fixtures::kCross2}), arch),
      arch);
  GuaranteeAlphabet ga = guarantee_alphabet(arch, rel);
  for (size_t i = 0; i < arch.processes.size(); ++i) {
    std::set<std::string> oi(arch.processes[i].outputs.begin(),
                             arch.processes[i].outputs.end());
    std::set<std::string> vi = oi;
    vi.insert(arch.processes[i].inputs.begin(), arch.processes[i].inputs.end());
    for (const auto& v : ga.guarantee_outputs[i]) CHECK(oi.count(v) == 1);
    for (const auto& v : ga.guarantee_vars[i]) CHECK(vi.count(v) == 1);
  }
}
