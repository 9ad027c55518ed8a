#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "certsynt/ltl.hpp"
#include "certsynt/machine.hpp"

namespace certsynt {

/// Conjunction of literals over atomic propositions; the empty cube is true.
struct CubeGuard {
  std::map<std::string, bool> lits;  // atom -> required polarity

  /// Letter satisfies every literal (atoms absent from the letter are false).
  bool sat_by(const Letter& l) const;
  /// Like sat_by, but literals over atoms outside `determined` are ignored:
  /// such atoms are free to take either value, so some completion of the
  /// letter satisfies them.
  bool sat_by_partial(const Letter& l, const std::set<std::string>& determined) const;
  std::string key() const;  // canonical text, for hashing/printing
};

struct AutomatonTransition {
  int from;
  CubeGuard guard;
  int to;
};

/// Nondeterministic Buechi automaton with symbolic cube guards.
struct Nba {
  std::set<std::string> alphabet;
  int initial = 0;
  std::vector<bool> accepting;  // per state
  std::vector<std::vector<AutomatonTransition>> trans;  // indexed by source

  int num_states() const { return static_cast<int>(accepting.size()); }
};

/// Universal co-Buechi automaton: same graph, read universally. A word is
/// accepted iff every run visits the rejecting set only finitely often; runs
/// that die because no transition matches are accepting.
struct UniversalCoBuchi {
  std::set<std::string> alphabet;
  int initial = 0;
  std::vector<bool> rejecting;  // per state
  std::vector<std::vector<AutomatonTransition>> trans;

  int num_states() const { return static_cast<int>(rejecting.size()); }
};

inline constexpr int kDefaultAutomatonCap = 5000;

/// Tableau translation of an LTL formula into an NBA accepting exactly the
/// words satisfying it. The formula is first brought into negation normal
/// form over the core operators; the node expansion follows the classic
/// on-the-fly construction, a generalized acceptance condition is
/// degeneralized with a counter, and the result is trimmed and quotiented by
/// transition-signature bisimulation. Throws ResourceError past `state_cap`.
Nba ltl_to_nba(const FormulaPtr& f, const std::set<std::string>& alphabet,
               int state_cap = kDefaultAutomatonCap);

/// Dualizes an NBA built for the *negation* of a property into a universal
/// co-Buechi automaton for the property itself: same states and transitions,
/// the Buechi-accepting states become the rejecting set.
UniversalCoBuchi nba_to_uca(const Nba& nba_of_negation);

/// Convenience: UCA for f, built as nba_to_uca(ltl_to_nba(!f)).
UniversalCoBuchi ltl_to_uca(const FormulaPtr& f, const std::set<std::string>& alphabet,
                            int state_cap = kDefaultAutomatonCap);

/// Does the NBA accept the ultimately periodic word stem . loop^omega?
/// loop must be non-empty.
bool nba_accepts_lasso(const Nba& nba, const Trace& stem, const Trace& loop);
bool uca_accepts_lasso(const UniversalCoBuchi& uca, const Trace& stem, const Trace& loop);

/// Product of a transition system with a UCA. Nodes are reachable
/// (state, automaton state) pairs; an edge exists iff some input letter moves
/// the system and, together with the emitted label, matches a guard. Guard
/// atoms neither read nor written by the system are unconstrained (they stand
/// for variables other processes own) and each edge records one witnessing
/// letter for counterexample extraction.
struct RunGraph {
  struct Node {
    int ts_state;
    int uca_state;
    bool rejecting;
  };
  struct Edge {
    int target;
    Letter witness;
  };
  std::vector<Node> nodes;  // node 0 is the initial node
  std::vector<std::vector<Edge>> edges;
  int initial = 0;
};

RunGraph build_run_graph(const Machine& ts, const UniversalCoBuchi& uca);

/// lambda(n) = maximal number of rejecting nodes on any path from the initial
/// node to n (n included); -1 for unreachable nodes. A valid annotation exists
/// iff no reachable cycle passes through a rejecting node, in which case every
/// edge (m,n) satisfies lambda(n) >= lambda(m), strictly when n is rejecting.
using Annotation = std::vector<long>;
std::optional<Annotation> find_valid_annotation(const RunGraph& rg);

/// A reachable rejecting cycle, as (stem, loop) letter traces; nullopt when a
/// valid annotation exists.
std::optional<std::pair<Trace, Trace>> counterexample_lasso(const RunGraph& rg);

std::string to_dot(const Nba& nba);
std::string to_dot(const UniversalCoBuchi& uca);
std::string to_dot(const RunGraph& rg);

}  // namespace certsynt
