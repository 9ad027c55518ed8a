#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "certsynt/architecture.hpp"
#include "certsynt/automata.hpp"
#include "certsynt/cnf.hpp"
#include "certsynt/ltl.hpp"

namespace certsynt {

enum class SemanticsMode { Moore, Mealy };

/// Per-process size bounds: strategy states and certificate states.
struct Bounds {
  std::vector<int> strategy_size;
  std::vector<int> cert_size;

  static Bounds uniform(int num_processes, int strategy, int cert);
};

struct EncoderLimits {
  int max_process_inputs = 12;        // 2^|I_j| input cubes are enumerated
  long long max_clauses = 20'000'000; // hard cap, ResourceError beyond
};

/// Everything decode() needs to read a model back, kept independent of the
/// encoder instance so it can be serialized alongside the DIMACS file.
struct EncodingLayout {
  SemanticsMode mode = SemanticsMode::Moore;
  std::vector<std::string> process_names;
  std::vector<std::vector<std::string>> inputs;        // cube bit order, per process
  std::vector<std::vector<std::string>> label_vars;    // O_j then associated, per process
  std::vector<std::vector<std::string>> assoc_vars;    // associated outputs, per process
  std::vector<std::vector<std::string>> guarantee_outputs;  // O^g_j order
  std::vector<int> strategy_size;
  std::vector<int> cert_size;
  std::vector<int> uca_states;
  std::vector<int> bound_width;  // annotation bit-vector width per process
};

/// Canonical variable names shared by the encoder and the decoder. `cube` and
/// state indices are rendered in decimal; Moore-mode label variables omit the
/// cube component.
namespace varname {
std::string trans_t(const std::string& proc, int t, uint32_t cube, int t2);
std::string out_t(const std::string& proc, int t, int cube_or_minus1, const std::string& v);
std::string trans_g(const std::string& proc, int u, uint32_t cube, int u2);
std::string out_g(const std::string& proc, int u, int cube_or_minus1, const std::string& v);
std::string sim_tg(const std::string& proc, int t, int u);
std::string sim_gt(const std::string& k, const std::string& j, int u, int t);
std::string reach(const std::string& proc, int t, int q);
std::string bound_bit(const std::string& proc, int t, int q, int bit);
}  // namespace varname

/// Builds the per-process constraint system for bounded certifying synthesis:
///  (a) certificate totality and determinism,
///  (b) simulation of the strategy by its own certificate,
///  (c) simulation of every relevant certificate by the strategy over input
///      pairs that agree on shared variables, gated by the valid-input test,
///  (d) local totality: a transition exists exactly when the input's
///      associated-output part matches the state's predictions,
///  (e) existence of a valid run-graph annotation against the process's UCA,
///      with bit-vector comparisons of width ceil(log2(|T|*|Q|+1)).
/// Mealy mode indexes labels by input cube and additionally requires at least
/// one transition per environment-input cube.
///
/// The constraint families are exposed individually so tests can exercise one
/// family in isolation; encode() emits all of them in a fixed order, making
/// repeated runs byte-identical.
class Encoder {
 public:
  Encoder(const Architecture& arch, const Decomposition& dec,
          const std::vector<std::set<int>>& relevant, const GuaranteeAlphabet& ga,
          const std::vector<UniversalCoBuchi>& ucas, const Bounds& bounds,
          SemanticsMode mode, EncoderLimits limits = {});
  ~Encoder();

  void add_guarantee_totality(int j);      // (a)
  void add_self_simulation(int j);         // (b)
  void add_cross_simulation(int k, int j); // (c), for k relevant to j
  void add_local_totality(int j);          // (d)
  void add_annotation(int j);              // (e)
  void add_mealy_env_totality(int j);      // Mealy extra; no clauses in Moore mode

  /// All families for all processes, in a fixed order.
  void encode_all();

  const CnfInstance& cnf() const;
  CnfInstance take_cnf();
  const EncodingLayout& layout() const;

  // Variable lookup (allocates on first use; pre-allocated by the constructor
  // in a deterministic order).
  int v_trans_t(int j, int t, uint32_t i, int t2);
  int v_out_t(int j, int t, uint32_t i, const std::string& v);  // i ignored in Moore mode
  int v_trans_g(int j, int u, uint32_t i, int u2);
  int v_out_g(int j, int u, uint32_t i, const std::string& v);
  int v_sim_tg(int j, int t, int u);
  int v_sim_gt(int k, int j, int u, int t);
  int v_reach(int j, int t, int q);
  int v_bound_bit(int j, int t, int q, int b);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-call convenience wrapper used by the synthesis loop.
struct EncodedProblem {
  CnfInstance cnf;
  EncodingLayout layout;
};
EncodedProblem encode(const Architecture& arch, const Decomposition& dec,
                      const std::vector<std::set<int>>& relevant,
                      const GuaranteeAlphabet& ga,
                      const std::vector<UniversalCoBuchi>& ucas, const Bounds& bounds,
                      SemanticsMode mode, EncoderLimits limits = {});

}  // namespace certsynt
