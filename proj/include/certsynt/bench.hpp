#pragma once

#include <string>

#include "certsynt/json_io.hpp"

namespace certsynt {

/// Generated benchmark families.
///
/// latch(k):  processes p_1..p_k, each reading its data bit inp_i and the
///            shared update signal; out_i stores inp_i on upd and holds
///            otherwise.
/// shift(k):  processes p_1..p_k, each reading all data bits i_1..i_k and
///            emitting o_i as the one-step delay of i_i.
/// adder(k):  ripple-carry adder; process for bit b reads x_b, y_b and the
///            previous carry (c_in for bit 0) and emits s_b, c_b, with c_b
///            wired into the next process.
/// robots(n1,n2): two robots at a shared crossing; mutual exclusion when both
///            are at the crossing plus per-robot liveness, and for n_i >= 1 an
///            additional heartbeat m_i that must repeat every n_i steps.
SpecFile make_latch_spec(int k);
SpecFile make_shift_spec(int k);
SpecFile make_adder_spec(int k);
SpecFile make_robots_spec(int n1, int n2);

/// Dispatch by family name ("latch", "shift", "adder", "robots"); param is
/// either an integer or, for robots, "n1,n2". Throws InvalidInput otherwise.
SpecFile make_bench_spec(const std::string& family, const std::string& param);

}  // namespace certsynt
