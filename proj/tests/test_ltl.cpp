#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "certsynt/architecture.hpp"
#include "certsynt/ltl.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace certsynt;
using namespace certsynt::ltl;

TEST_CASE("parse: basic operators and precedence") {
  CHECK(ltl_equal(parse_ltl("G (a -> X F b)"),
                  mk_globally(mk_implies(atom("a"), mk_next(mk_eventually(atom("b")))))));
  CHECK(ltl_equal(parse_ltl("a || b && c"), mk_or(atom("a"), mk_and(atom("b"), atom("c")))));
  CHECK(ltl_equal(parse_ltl("!a U b"), mk_until(mk_not(atom("a")), atom("b"))));
  CHECK(ltl_equal(parse_ltl("X a U b"), mk_until(mk_next(atom("a")), atom("b"))));
  CHECK(ltl_equal(parse_ltl("F a && b"), mk_and(mk_eventually(atom("a")), atom("b"))));
  CHECK(ltl_equal(parse_ltl("a U b U c"), mk_until(atom("a"), mk_until(atom("b"), atom("c")))));
  CHECK(ltl_equal(parse_ltl("a -> b -> c"),
                  mk_implies(atom("a"), mk_implies(atom("b"), atom("c")))));
  CHECK(ltl_equal(parse_ltl("a && b || c"), mk_or(mk_and(atom("a"), atom("b")), atom("c"))));
  CHECK(ltl_equal(parse_ltl("true"), tru()));
  CHECK(ltl_equal(parse_ltl("false"), fls()));
  CHECK(ltl_equal(parse_ltl("!!a"), mk_not(mk_not(atom("a")))));
}

TEST_CASE("parse: safety conjunct of the crossing example") {
  FormulaPtr expected = mk_globally(mk_not(
      mk_and(mk_and(atom("c1"), mk_next(atom("g1"))), mk_and(atom("c2"), mk_next(atom("g2"))))));
  CHECK(ltl_equal(parse_ltl("G !((c1 && X g1) && (c2 && X g2))"), expected));
}

TEST_CASE("parse: iff is sugar for the boolean expansion") {
  FormulaPtr expected = mk_or(mk_and(atom("a"), atom("b")),
                              mk_and(mk_not(atom("a")), mk_not(atom("b"))));
  CHECK(ltl_equal(parse_ltl("a <-> b"), expected));
}

TEST_CASE("parse: syntax errors carry positions") {
  CHECK_THROWS_AS(parse_ltl("a U"), ParseError);
  CHECK_THROWS_AS(parse_ltl(""), ParseError);
  CHECK_THROWS_AS(parse_ltl("(a"), ParseError);
  CHECK_THROWS_AS(parse_ltl("a b"), ParseError);
  CHECK_THROWS_AS(parse_ltl("a &&"), ParseError);
  CHECK_THROWS_AS(parse_ltl("&& a"), ParseError);
  CHECK_THROWS_AS(parse_ltl("a & b"), ParseError);
  CHECK_THROWS_AS(parse_ltl("9a"), ParseError);
  try {
    parse_ltl("a U");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column >= 3);
  }
}

TEST_CASE("atomic_props") {
  CHECK(atomic_props(parse_ltl(fixtures::kSafe)) ==
        std::set<std::string>{"at_crossing_1", "at_crossing_2", "go_1", "go_2"});
  CHECK(atomic_props(tru()).empty());
  CHECK(atomic_props(parse_ltl("a && a")) == std::set<std::string>{"a"});
}

TEST_CASE("expand_sugar rewrites derived operators") {
  CHECK(ltl_equal(expand_sugar(parse_ltl("F a")), mk_until(tru(), atom("a"))));
  CHECK(ltl_equal(expand_sugar(parse_ltl("G a")),
                  mk_not(mk_until(tru(), mk_not(atom("a"))))));
  CHECK(ltl_equal(expand_sugar(parse_ltl("a -> b")), mk_or(mk_not(atom("a")), atom("b"))));
}

TEST_CASE("expand_sugar preserves lasso semantics") {
  std::mt19937 rng(7001);
  std::vector<std::string> atoms = {"a", "b", "c"};
  for (int round = 0; round < 300; ++round) {
    FormulaPtr f = oracle::random_formula(rng, oracle::rnd(rng, 0, 6), atoms);
    Trace stem = oracle::random_trace(rng, atoms, 0, 4);
    Trace loop = oracle::random_trace(rng, atoms, 1, 4);
    CHECK(oracle::eval_lasso(f, stem, loop) ==
          oracle::eval_lasso(expand_sugar(f), stem, loop));
  }
}

TEST_CASE("to_string output parses back to an equal formula") {
  std::mt19937 rng(7002);
  std::vector<std::string> atoms = {"a", "b", "c"};
  for (int round = 0; round < 300; ++round) {
    FormulaPtr f = oracle::random_formula(rng, oracle::rnd(rng, 0, 6), atoms);
    CHECK(ltl_equal(parse_ltl(to_string(f)), f));
  }
}

TEST_CASE("split_conjuncts flattens only the top-level spine") {
  auto parts = split_conjuncts(parse_ltl("a && (b && c)"));
  REQUIRE(parts.size() == 3);
  CHECK(ltl_equal(parts[0], atom("a")));
  CHECK(ltl_equal(parts[1], atom("b")));
  CHECK(ltl_equal(parts[2], atom("c")));
  CHECK(split_conjuncts(parse_ltl("G (a && b)")).size() == 1);
  CHECK(split_conjuncts(parse_ltl("a || (b && c)")).size() == 1);
}

TEST_CASE("parse_spec splits every text at top-level conjunctions") {
  ConjunctiveSpec spec = parse_spec({"a && b", "G c"});
  REQUIRE(spec.conjuncts.size() == 3);
  CHECK(ltl_equal(spec.conjunction(),
                  mk_and(mk_and(atom("a"), atom("b")), mk_globally(atom("c")))));
  CHECK(ltl_equal(ConjunctiveSpec{}.conjunction(), tru()));
}

namespace {

Architecture robots() { return fixtures::robots_arch_plain(); }

ConjunctiveSpec robots_spec() {
  return parse_spec({fixtures::kSafe, fixtures::kCross1, fixtures::kCross2});
}

}  // namespace

TEST_CASE("decompose: crossing example matches the worked subspecifications") {
  Architecture arch = robots();
  ConjunctiveSpec spec = robots_spec();
  Decomposition dec = decompose(spec, arch);
  REQUIRE(dec.subspecs.size() == 2);
  REQUIRE(dec.subspecs[0].conjuncts.size() == 2);
  CHECK(ltl_equal(dec.subspecs[0].conjuncts[0], parse_ltl(fixtures::kSafe)));
  CHECK(ltl_equal(dec.subspecs[0].conjuncts[1], parse_ltl(fixtures::kCross1)));
  REQUIRE(dec.subspecs[1].conjuncts.size() == 2);
  CHECK(ltl_equal(dec.subspecs[1].conjuncts[0], parse_ltl(fixtures::kSafe)));
  CHECK(ltl_equal(dec.subspecs[1].conjuncts[1], parse_ltl(fixtures::kCross2)));
}

TEST_CASE("decompose: input-only conjuncts go to every process") {
  Architecture arch = robots();
  ConjunctiveSpec spec = parse_spec({"G at_crossing_1"});
  Decomposition dec = decompose(spec, arch);
  CHECK(dec.subspecs[0].conjuncts.size() == 1);
  CHECK(dec.subspecs[1].conjuncts.size() == 1);
}

TEST_CASE("decompose: unknown atoms are rejected") {
  CHECK_THROWS_AS(decompose(parse_spec({"G nosuchvar"}), robots()), InvalidInput);
}

TEST_CASE("decompose and relevant_processes equal the direct set evaluation") {
  Architecture arch = make_architecture(
      {make_process("p_1", {"i", "o2"}, {"o1", "u1"}),
       make_process("p_2", {"i", "o1", "o3"}, {"o2"}),
       make_process("p_3", {"i", "o2"}, {"o3"})},
      {"i"});
  std::set<std::string> out = arch.outputs_union();

  std::mt19937 rng(7003);
  std::vector<std::string> atoms = {"i", "o1", "o2", "o3", "u1"};
  for (int round = 0; round < 100; ++round) {
    ConjunctiveSpec spec;
    int k = oracle::rnd(rng, 1, 6);
    for (int c = 0; c < k; ++c) {
      FormulaPtr f = oracle::random_formula(rng, oracle::rnd(rng, 1, 4), atoms);
      for (const auto& part : split_conjuncts(f)) spec.conjuncts.push_back(part);
    }
    Decomposition dec = decompose(spec, arch);
    REQUIRE(dec.subspecs.size() == arch.processes.size());

    // Direct evaluation of the membership predicate per conjunct.
    for (size_t i = 0; i < arch.processes.size(); ++i) {
      std::set<std::string> oi(arch.processes[i].outputs.begin(),
                               arch.processes[i].outputs.end());
      std::vector<FormulaPtr> expected;
      for (const auto& xi : spec.conjuncts) {
        std::set<std::string> props = atomic_props(xi);
        bool touches_oi = false, touches_out = false;
        for (const auto& a : props) {
          touches_oi = touches_oi || oi.count(a) > 0;
          touches_out = touches_out || out.count(a) > 0;
        }
        if (touches_oi || !touches_out) expected.push_back(xi);
      }
      REQUIRE(dec.subspecs[i].conjuncts.size() == expected.size());
      for (size_t c = 0; c < expected.size(); ++c)
        CHECK(ltl_equal(dec.subspecs[i].conjuncts[c], expected[c]));
    }

    // Relevant processes against the direct predicate.
    auto rel = relevant_processes(dec, arch);
    for (size_t i = 0; i < arch.processes.size(); ++i) {
      std::set<std::string> props;
      for (const auto& xi : dec.subspecs[i].conjuncts)
        for (const auto& a : atomic_props(xi)) props.insert(a);
      std::set<int> expected;
      for (size_t j = 0; j < arch.processes.size(); ++j) {
        if (j == i) continue;
        for (const auto& o : arch.processes[j].outputs)
          if (props.count(o)) expected.insert(static_cast<int>(j));
      }
      CHECK(rel[i] == expected);
      CHECK(rel[i].count(static_cast<int>(i)) == 0);
    }
  }
}

TEST_CASE("relevant_processes: crossing example and decoupled specs") {
  Architecture arch = robots();
  Decomposition dec = decompose(robots_spec(), arch);
  auto rel = relevant_processes(dec, arch);
  CHECK(rel[0] == std::set<int>{1});
  CHECK(rel[1] == std::set<int>{0});

  // Fully decoupled: each subspecification only mentions the process's own
  // variables.
  Architecture arch2 = make_architecture(
      {make_process("a", {"i1"}, {"x"}), make_process("b", {"i2"}, {"y"})}, {"i1", "i2"});
  Decomposition dec2 = decompose(parse_spec({"G (i1 -> X x)", "G (i2 -> X y)"}), arch2);
  auto rel2 = relevant_processes(dec2, arch2);
  CHECK(rel2[0].empty());
  CHECK(rel2[1].empty());
}

TEST_CASE("decompose is idempotent per process and covers every conjunct") {
  Architecture arch = robots();
  ConjunctiveSpec spec = robots_spec();
  Decomposition dec = decompose(spec, arch);
  for (size_t i = 0; i < dec.subspecs.size(); ++i) {
    Decomposition again = decompose(dec.subspecs[i], arch);
    REQUIRE(again.subspecs[i].conjuncts.size() == dec.subspecs[i].conjuncts.size());
    for (size_t c = 0; c < dec.subspecs[i].conjuncts.size(); ++c)
      CHECK(ltl_equal(again.subspecs[i].conjuncts[c], dec.subspecs[i].conjuncts[c]));
  }
  // Coverage: every source conjunct appears in some subspecification.
  for (const auto& xi : spec.conjuncts) {
    bool found = false;
    for (const auto& sub : dec.subspecs)
      for (const auto& c : sub.conjuncts) found = found || ltl_equal(c, xi);
    CHECK(found);
  }
}

TEST_CASE("duplicate conjuncts are preserved") {
  ConjunctiveSpec spec = parse_spec({"G a", "G a"});
  CHECK(spec.conjuncts.size() == 2);
}
