#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "certsynt/common.hpp"

namespace certsynt {

using Letter = std::set<std::string>;
using Trace = std::vector<Letter>;

/// Finite-state transition system with designated inputs and outputs.
///
/// The transition function maps (state, input letter) to a successor and may
/// be partial (-1 marks an undefined transition). Labels are Moore by default
/// (one output letter per state); with `mealy` set, each state carries one
/// output letter per input cube instead.
///
/// The same struct serves three roles:
///   MooreTs      - complete strategy, total transition function
///   GuaranteeTs  - certificate over (I_i, O^g_i), total and deterministic
///   LocalStrategy- partial strategy whose labels may also carry predictions
///                  for observable outputs of other processes; those label
///                  variables are listed in `assoc_outputs`.
struct Machine {
  std::vector<std::string> inputs;   // bit k of an input cube <-> inputs[k]
  std::vector<std::string> outputs;  // bit k of a label mask <-> outputs[k]
  std::vector<std::string> assoc_outputs;  // subset of outputs; predictions only
  bool mealy = false;
  int initial = 0;

  struct State {
    std::string name;
    uint32_t label = 0;          // Moore label mask
    std::vector<int> succ;       // size 2^|inputs|, -1 = undefined
    std::vector<uint32_t> out;   // Mealy only: label mask per input cube
  };
  std::vector<State> states;

  uint32_t cube_count() const { return 1u << inputs.size(); }
  uint32_t letter_to_cube(const Letter& l) const;
  Letter cube_to_letter(uint32_t cube) const;
  uint32_t output_mask(const Letter& l) const;
  Letter mask_to_letter(uint32_t mask) const;
  /// Output letter of `state`; for Mealy machines the label under `cube`.
  Letter label_letter(int state, uint32_t cube = 0) const;
  uint32_t label_mask(int state, uint32_t cube = 0) const;

  bool is_total() const;
  State& add_state(std::string name, uint32_t label = 0);
};

bool same_behaviour(const Machine& a, const Machine& b);

/// Runs the machine on a finite input trace (letters are intersected with the
/// machine's inputs). Produces one letter, input + emitted label, per
/// position; stops early at the first undefined transition, so the result may
/// be shorter than the input. An empty input trace yields an empty trace.
Trace compute(const Machine& m, const Trace& input_trace);

/// Parallel composition of two Moore machines with disjoint outputs. Inputs of
/// the result are the variables neither machine produces; each component is
/// fed the external input joined with the other's current label. Only the
/// reachable part is built; a transition is defined iff both components move.
Machine parallel_compose(const Machine& a, const Machine& b);

/// Simulation of `concrete` by `abstract` with respect to the outputs in
/// `obs` (obs must be covered by both machines' outputs; both machines run on
/// the same input variables). Returns the greatest relation R over
/// (concrete state, abstract state) such that related states agree on obs and
/// every defined concrete transition is matched by an abstract one into R --
/// or nullopt when the initial states are not related.
std::optional<std::set<std::pair<int, int>>> simulates(const Machine& abstract,
                                                       const Machine& concrete,
                                                       const std::set<std::string>& obs);

/// Checks whether a finite prefix of letters over the full variable set is a
/// valid history with respect to a set of guarantee machines: at every
/// position k, the prefix restricted to a guarantee's outputs must equal what
/// that guarantee emits after reading the prefix's projection to its inputs.
bool is_valid_history(const Trace& prefix, const std::vector<const Machine*>& guarantees);

/// Restriction of a strategy to the behaviours that keep every guarantee's
/// history valid. Unobservable variables are existentially completed, so the
/// construction tracks the set of guarantee-state profiles consistent with
/// the observations so far; an input letter stays defined iff some profile
/// tolerates it. The result behaves exactly like `s` wherever it is defined.
Machine restrict_strategy(const Machine& s, const std::vector<Machine>& guarantees);

/// Extension of a partial strategy into a total one: behaves like `s` while
/// its transitions are defined and permanently switches to tracking the
/// process's own guarantee machine at the first undefined input; outputs
/// outside the guarantee's alphabet are then fixed to the empty choice.
/// Prediction variables (assoc_outputs) are dropped from the result. Requires
/// label agreement with `own` on the guarantee outputs along the defined part
/// (the decoded strategies satisfy this by construction); throws InvalidInput
/// otherwise.
Machine extend_strategy(const Machine& s, const Machine& own);

}  // namespace certsynt
