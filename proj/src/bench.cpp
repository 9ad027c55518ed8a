#include "certsynt/bench.hpp"

#include <charconv>
#include <string>
#include <vector>

#include "certsynt/common.hpp"

namespace certsynt {

namespace {

std::string num(const std::string& base, int i) { return base + std::to_string(i); }

int parse_int(const std::string& text, int lo, int hi, const std::string& what) {
  int value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw InvalidInput(what + " must be an integer, got \"" + text + "\"");
  if (value < lo || value > hi)
    throw InvalidInput(what + " must be between " + std::to_string(lo) + " and " +
                       std::to_string(hi) + ", got " + text);
  return value;
}

/// One full-adder bit: carry-out equation and sum equation.
std::string adder_bit(const std::string& x, const std::string& y, const std::string& cin,
                      const std::string& s, const std::string& cout) {
  std::string carry = "G (X " + cout + " <-> ((" + x + " && " + y + ") || (" + cin +
                      " && ((" + x + " && !" + y + ") || (!" + x + " && " + y + ")))))";
  std::string sum = "G (X " + s + " <-> ((" + x + " && !" + y + " && !" + cin + ") || (!" +
                    x + " && " + y + " && !" + cin + ") || (!" + x + " && !" + y + " && " +
                    cin + ") || (" + x + " && " + y + " && " + cin + ")))";
  return carry + " && " + sum;
}

std::string x_chain(int steps, const std::string& body) {
  std::string out;
  for (int i = 0; i < steps; ++i) out += "X ";
  return out + body;
}

}  // namespace

SpecFile make_latch_spec(int k) {
  if (k < 1 || k > 16) throw InvalidInput("latch parameter must be between 1 and 16");
  SpecFile spec;
  std::vector<Process> procs;
  std::vector<std::string> env = {"upd"};
  for (int i = 1; i <= k; ++i) {
    std::string inp = num("inp_", i);
    std::string out = num("out_", i);
    env.push_back(inp);
    procs.push_back(make_process(num("p_", i), {"upd", inp}, {out}));
    spec.conjunct_texts.push_back("G ((upd && " + inp + ") -> X " + out + ")");
    spec.conjunct_texts.push_back("G ((upd && !" + inp + ") -> !X " + out + ")");
    spec.conjunct_texts.push_back("G (!upd -> ((" + out + " && X " + out + ") || (!" + out +
                                  " && !X " + out + ")))");
  }
  spec.arch = make_architecture(std::move(procs), std::move(env));
  return spec;
}

SpecFile make_shift_spec(int k) {
  if (k < 1 || k > 12) throw InvalidInput("shift parameter must be between 1 and 12");
  SpecFile spec;
  std::vector<std::string> env;
  for (int i = 1; i <= k; ++i) env.push_back(num("i_", i));
  std::vector<Process> procs;
  for (int i = 1; i <= k; ++i) {
    std::string in = num("i_", i);
    std::string out = num("o_", i);
    procs.push_back(make_process(num("p_", i), env, {out}));
    spec.conjunct_texts.push_back("G ((" + in + " -> X " + out + ") && (!" + in + " -> !X " +
                                  out + "))");
  }
  spec.arch = make_architecture(std::move(procs), std::move(env));
  return spec;
}

SpecFile make_adder_spec(int k) {
  if (k < 1 || k > 16) throw InvalidInput("adder parameter must be between 1 and 16");
  SpecFile spec;
  std::vector<std::string> env = {"c_in"};
  std::vector<Process> procs;
  for (int b = 0; b < k; ++b) {
    std::string x = num("x_", b);
    std::string y = num("y_", b);
    std::string cin = b == 0 ? "c_in" : num("c_", b - 1);
    env.push_back(x);
    env.push_back(y);
    procs.push_back(make_process(num("p_", b + 1), {x, y, cin}, {num("s_", b), num("c_", b)}));
    spec.conjunct_texts.push_back(adder_bit(x, y, cin, num("s_", b), num("c_", b)));
  }
  spec.arch = make_architecture(std::move(procs), std::move(env));
  return spec;
}

SpecFile make_robots_spec(int n1, int n2) {
  if (n1 < 0 || n1 > 32 || n2 < 0 || n2 > 32)
    throw InvalidInput("robots parameters must be between 0 and 32");
  SpecFile spec;
  spec.arch = make_architecture(
      {make_process("r_1", {"at_crossing_1", "at_crossing_2", "go_2"}, {"go_1", "m_1"}),
       make_process("r_2", {"at_crossing_1", "at_crossing_2", "go_1"}, {"go_2", "m_2"})},
      {"at_crossing_1", "at_crossing_2"});
  spec.conjunct_texts.push_back(
      "G !((at_crossing_1 && X go_1) && (at_crossing_2 && X go_2))");
  int params[2] = {n1, n2};
  for (int i = 1; i <= 2; ++i) {
    std::string ac = num("at_crossing_", i);
    std::string go = num("go_", i);
    spec.conjunct_texts.push_back("G (" + ac + " -> X F " + go + ")");
    int n = params[i - 1];
    if (n == 0) continue;  // no additional objective for this robot
    std::string m = num("m_", i);
    std::string chain;
    for (int step = 1; step < n; ++step) chain += x_chain(step, "!" + m) + " && ";
    chain += x_chain(n, m);
    spec.conjunct_texts.push_back(m + " && G (" + m + " -> (" + chain + "))");
  }
  return spec;
}

SpecFile make_bench_spec(const std::string& family, const std::string& param) {
  if (family == "latch") return make_latch_spec(parse_int(param, 1, 16, "latch parameter"));
  if (family == "shift") return make_shift_spec(parse_int(param, 1, 12, "shift parameter"));
  if (family == "adder") return make_adder_spec(parse_int(param, 1, 16, "adder parameter"));
  if (family == "robots") {
    auto comma = param.find(',');
    if (comma == std::string::npos) {
      int n = parse_int(param, 0, 32, "robots parameter");
      return make_robots_spec(n, n);
    }
    return make_robots_spec(parse_int(param.substr(0, comma), 0, 32, "robots parameter n1"),
                            parse_int(param.substr(comma + 1), 0, 32, "robots parameter n2"));
  }
  throw InvalidInput("unknown benchmark family \"" + family +
                     "\" (expected latch, shift, adder or robots)");
}

}  // namespace certsynt
