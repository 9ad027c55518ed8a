#pragma once

// Shared hand-built machines and architectures for the robots example: the
// two-state guarantee/strategy machines from the worked example, plus the
// matching architecture. State 0 is always the initial state.

#include <cstdint>
#include <string>
#include <vector>

#include "certsynt/architecture.hpp"
#include "certsynt/machine.hpp"

namespace fixtures {

using certsynt::Architecture;
using certsynt::Machine;

// Sorted input orders; bit 0 = at_crossing_1, bit 1 = at_crossing_2, bit 2 =
// the other robot's go signal.
inline const std::vector<std::string> kInputsR1 = {"at_crossing_1", "at_crossing_2",
                                                   "go_2"};
inline const std::vector<std::string> kInputsR2 = {"at_crossing_1", "at_crossing_2",
                                                   "go_1"};

/// Two-state machine whose next state tracks at_crossing_1: state 0 after
/// at_crossing_1, state 1 otherwise. All four example machines share this
/// shape and differ only in labels.
inline Machine crossing_tracker(std::vector<std::string> inputs, std::string output,
                                bool state0_emits) {
  Machine m;
  m.inputs = std::move(inputs);
  m.outputs = {std::move(output)};
  auto& s0 = m.add_state("t0", state0_emits ? 1u : 0u);
  auto& s1 = m.add_state("t1", state0_emits ? 0u : 1u);
  for (uint32_t c = 0; c < m.cube_count(); ++c) {
    s0.succ[c] = (c & 1u) ? 0 : 1;
    s1.succ[c] = (c & 1u) ? 0 : 1;
  }
  return m;
}

/// GTS g_2: emits go_2 exactly when r_1 was not at the crossing last step.
inline Machine fig_g2() { return crossing_tracker(kInputsR2, "go_2", false); }

/// GTS g_1: emits go_1 exactly when r_1 was at the crossing last step
/// (initially go_1).
inline Machine fig_g1() { return crossing_tracker(kInputsR1, "go_1", true); }

/// Total strategy s_1 (black and gray transitions together).
inline Machine fig_s1_total() { return crossing_tracker(kInputsR1, "go_1", true); }

/// Total strategy s_2 (black and gray transitions together).
inline Machine fig_s2_total() { return crossing_tracker(kInputsR2, "go_2", false); }

/// Local strategy s_1: only the black transitions. In state t0 (go_1 high)
/// transitions exist only for inputs without go_2; in t1 only with go_2.
inline Machine fig_s1_black() {
  Machine m = fig_s1_total();
  for (uint32_t c = 0; c < m.cube_count(); ++c) {
    if (c & 4u) m.states[0].succ[c] = -1;
    if (!(c & 4u)) m.states[1].succ[c] = -1;
  }
  return m;
}

/// Local strategy s_2: only the black transitions (t0 requires go_1, t1
/// requires !go_1).
inline Machine fig_s2_black() {
  Machine m = fig_s2_total();
  for (uint32_t c = 0; c < m.cube_count(); ++c) {
    if (!(c & 4u)) m.states[0].succ[c] = -1;
    if (c & 4u) m.states[1].succ[c] = -1;
  }
  return m;
}

/// Robots architecture (no heartbeat outputs; matches the worked example
/// machines which only drive go_1/go_2).
inline Architecture robots_arch_plain() {
  return certsynt::make_architecture(
      {certsynt::make_process("r_1", kInputsR1, {"go_1"}),
       certsynt::make_process("r_2", kInputsR2, {"go_2"})},
      {"at_crossing_1", "at_crossing_2"});
}

inline const char* kSafe = "G !((at_crossing_1 && X go_1) && (at_crossing_2 && X go_2))";
inline const char* kCross1 = "G (at_crossing_1 -> X F go_1)";
inline const char* kCross2 = "G (at_crossing_2 -> X F go_2)";

}  // namespace fixtures
