#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "certsynt/common.hpp"

namespace certsynt {

struct Architecture;

enum class LtlKind {
  Atom,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Eventually,
  Globally,
};

struct LtlFormula;
using FormulaPtr = std::shared_ptr<const LtlFormula>;

/// Immutable LTL syntax tree. `Eventually`, `Globally` and `Implies` are kept
/// as first-class nodes; they are rewritten into the core operators only where
/// an algorithm needs that (see expand_sugar and the automata translation).
struct LtlFormula {
  LtlKind kind;
  std::string atom;                  // Atom only
  std::vector<FormulaPtr> children;  // unary: 1 child, binary: 2 children
};

namespace ltl {
FormulaPtr atom(std::string name);
FormulaPtr tru();
FormulaPtr fls();
FormulaPtr mk_not(FormulaPtr a);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_next(FormulaPtr a);
FormulaPtr mk_until(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_eventually(FormulaPtr a);
FormulaPtr mk_globally(FormulaPtr a);
}  // namespace ltl

bool ltl_equal(const FormulaPtr& a, const FormulaPtr& b);
std::string to_string(const FormulaPtr& f);

/// Set of atomic propositions occurring in f.
std::set<std::string> atomic_props(const FormulaPtr& f);

/// Rewrites derived operators into the core set:
///   F a -> true U a,   G a -> !(true U !a),   a -> b  -->  !a || b.
/// Atoms, boolean connectives, X and U are preserved.
FormulaPtr expand_sugar(const FormulaPtr& f);

/// Parses one LTL formula.
///
/// Grammar (loosest to tightest): `->`/`<->` (right assoc.), `||`, `&&`,
/// `U` (right assoc.), then the prefix operators `!`, `X`, `F`, `G`.
/// Identifiers are atoms; `true`/`false` are constants. `a <-> b` has no AST
/// node of its own and is parsed as `(a && b) || (!a && !b)` so that it can
/// never manufacture an artificial top-level conjunction.
///
/// Throws ParseError with a 1-based line/column on bad input.
FormulaPtr parse_ltl(const std::string& text);

/// A specification given as an explicit conjunction. Conjuncts are ordered and
/// duplicates are kept; identical conjuncts may legitimately come from
/// different sources.
struct ConjunctiveSpec {
  std::vector<FormulaPtr> conjuncts;

  /// Conjunction of all conjuncts (true when empty).
  FormulaPtr conjunction() const;
};

/// Splits a formula at top-level `&&` only; the spine is flattened, so
/// `a && (b && c)` yields three conjuncts while `G (a && b)` stays one.
std::vector<FormulaPtr> split_conjuncts(const FormulaPtr& f);

/// Parses a list of formula texts into a spec; each element is split at its
/// top-level conjunctions, preserving order.
ConjunctiveSpec parse_spec(const std::vector<std::string>& conjunct_texts);

/// Per-process subspecifications, aligned with Architecture::processes.
struct Decomposition {
  std::vector<ConjunctiveSpec> subspecs;
};

/// Assigns every conjunct xi to process i iff prop(xi) intersects O_i, or xi
/// mentions no system output at all (input-only conjuncts go to everyone).
/// Conjuncts over unknown atoms are rejected with InvalidInput.
Decomposition decompose(const ConjunctiveSpec& spec, const Architecture& arch);

/// relevant[i] = indices j != i such that O_j intersects prop(subspec_i).
std::vector<std::set<int>> relevant_processes(const Decomposition& dec,
                                              const Architecture& arch);

}  // namespace certsynt
