#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <vector>

#include "sat_internal.hpp"

namespace certsynt::internal {

namespace {

// Conflict-driven clause learning with two-watched literals, VSIDS decisions,
// phase saving, Luby restarts and activity-based learnt-clause reduction.
// Literals are encoded as 2*var (+1 for negation) over 0-based variables.

class Cdcl {
 public:
  Cdcl(int nvars, const std::vector<std::vector<int>>& clauses) : n_(nvars) {
    value_.assign(static_cast<size_t>(n_), kUndef);
    level_.assign(static_cast<size_t>(n_), 0);
    reason_.assign(static_cast<size_t>(n_), nullptr);
    activity_.assign(static_cast<size_t>(n_), 0.0);
    phase_.assign(static_cast<size_t>(n_), false);
    seen_.assign(static_cast<size_t>(n_), false);
    heap_pos_.assign(static_cast<size_t>(n_), -1);
    watches_.assign(static_cast<size_t>(2 * n_), {});
    for (int v = 0; v < n_; ++v) heap_insert(v);

    for (const auto& ext : clauses) {
      std::vector<int> lits;
      lits.reserve(ext.size());
      for (int l : ext) lits.push_back(l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1);
      std::sort(lits.begin(), lits.end());
      lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
      bool tautology = false;
      for (size_t i = 0; i + 1 < lits.size(); ++i)
        if ((lits[i] ^ 1) == lits[i + 1]) tautology = true;
      if (tautology) continue;
      if (lits.empty()) {
        unsat_ = true;
        return;
      }
      if (lits.size() == 1) {
        if (lit_value(lits[0]) == kFalse) {
          unsat_ = true;
          return;
        }
        if (lit_value(lits[0]) == kUndef) enqueue(lits[0], nullptr);
        continue;
      }
      attach(new_clause(std::move(lits), false));
    }
  }

  ~Cdcl() {
    for (Clause* c : originals_) delete_clause(c);
    for (Clause* c : learnts_) delete_clause(c);
  }

  // 1 = sat, 0 = unsat, -1 = timeout
  int solve(double timeout_sec) {
    if (unsat_) return 0;
    if (propagate() != nullptr) return 0;

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(timeout_sec));
    double max_learnts = static_cast<double>(originals_.size()) / 3.0 + 1000.0;
    long restart_no = 0;

    while (true) {
      const long budget = 100L * luby(restart_no++);
      long conflicts = 0;
      while (conflicts < budget) {
        Clause* confl = propagate();
        if (confl != nullptr) {
          ++conflicts;
          ++total_conflicts_;
          if (decision_level() == 0) return 0;
          std::vector<int> learnt;
          int bt_level = 0;
          analyze(confl, learnt, bt_level);
          backtrack(bt_level);
          if (learnt.size() == 1) {
            enqueue(learnt[0], nullptr);
          } else {
            Clause* c = new_clause(std::move(learnt), true);
            learnts_.push_back(c);
            attach(c);
            bump_clause(c);
            enqueue(c->lits[0], c);
          }
          var_inc_ /= 0.95;
          cla_inc_ /= 0.999;
          if ((total_conflicts_ & 1023) == 0 && timeout_sec > 0 &&
              std::chrono::steady_clock::now() >= deadline)
            return -1;
        } else {
          if (static_cast<double>(learnts_.size()) >= max_learnts) reduce_db();
          const int next = pick_branch();
          if (next < 0) return 1;  // complete assignment
          ++decisions_;
          trail_lim_.push_back(static_cast<int>(trail_.size()));
          enqueue(phase_[static_cast<size_t>(next)] ? 2 * next : 2 * next + 1, nullptr);
        }
      }
      max_learnts *= 1.05;
      backtrack(0);
    }
  }

  std::vector<bool> model() const {
    std::vector<bool> m(static_cast<size_t>(n_ + 1), false);
    for (int v = 0; v < n_; ++v) m[static_cast<size_t>(v + 1)] = value_[static_cast<size_t>(v)] == kTrue;
    return m;
  }

  long conflicts() const { return total_conflicts_; }
  long decisions() const { return decisions_; }

 private:
  struct Clause {
    double act = 0.0;
    bool learnt = false;
    std::vector<int> lits;
  };

  static constexpr int8_t kUndef = 0, kTrue = 1, kFalse = 2;

  int n_;
  bool unsat_ = false;
  std::vector<int8_t> value_;  // per variable
  std::vector<int> level_;
  std::vector<Clause*> reason_;
  std::vector<double> activity_;
  std::vector<bool> phase_;
  std::vector<bool> seen_;
  std::vector<std::vector<Clause*>> watches_;  // per literal
  std::vector<Clause*> originals_, learnts_;
  std::vector<int> trail_, trail_lim_;
  size_t qhead_ = 0;
  double var_inc_ = 1.0, cla_inc_ = 1.0;
  long total_conflicts_ = 0, decisions_ = 0;

  // Indexed max-heap on variable activity.
  std::vector<int> heap_;
  std::vector<int> heap_pos_;

  static int var_of(int lit) { return lit >> 1; }
  static bool sign_of(int lit) { return lit & 1; }  // true = negative literal

  int8_t lit_value(int lit) const {
    const int8_t v = value_[static_cast<size_t>(var_of(lit))];
    if (v == kUndef) return kUndef;
    return (v == kTrue) != sign_of(lit) ? kTrue : kFalse;
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  Clause* new_clause(std::vector<int> lits, bool learnt) {
    auto* c = new Clause;
    c->learnt = learnt;
    c->lits = std::move(lits);
    if (!learnt) originals_.push_back(c);
    return c;
  }
  void delete_clause(Clause* c) { delete c; }

  void attach(Clause* c) {
    watches_[static_cast<size_t>(c->lits[0] ^ 1)].push_back(c);
    watches_[static_cast<size_t>(c->lits[1] ^ 1)].push_back(c);
  }
  void detach(Clause* c) {
    for (int w : {c->lits[0] ^ 1, c->lits[1] ^ 1}) {
      auto& list = watches_[static_cast<size_t>(w)];
      list.erase(std::remove(list.begin(), list.end(), c), list.end());
    }
  }

  void enqueue(int lit, Clause* from) {
    const int v = var_of(lit);
    value_[static_cast<size_t>(v)] = sign_of(lit) ? kFalse : kTrue;
    level_[static_cast<size_t>(v)] = decision_level();
    reason_[static_cast<size_t>(v)] = from;
    phase_[static_cast<size_t>(v)] = !sign_of(lit);
    trail_.push_back(lit);
  }

  Clause* propagate() {
    while (qhead_ < trail_.size()) {
      const int p = trail_[qhead_++];  // p became true; visit clauses watching !p
      auto& ws = watches_[static_cast<size_t>(p)];
      size_t keep = 0;
      Clause* conflict = nullptr;
      for (size_t i = 0; i < ws.size(); ++i) {
        Clause* c = ws[i];
        auto& lits = c->lits;
        const int false_lit = p ^ 1;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        // lits[1] == false_lit now
        if (lit_value(lits[0]) == kTrue) {
          ws[keep++] = c;
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < lits.size(); ++k) {
          if (lit_value(lits[k]) != kFalse) {
            std::swap(lits[1], lits[k]);
            watches_[static_cast<size_t>(lits[1] ^ 1)].push_back(c);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        // clause is unit or conflicting
        ws[keep++] = c;
        if (lit_value(lits[0]) == kFalse) {
          conflict = c;
          for (size_t k = i + 1; k < ws.size(); ++k) ws[keep++] = ws[k];
          break;
        }
        enqueue(lits[0], c);
      }
      ws.resize(keep);
      if (conflict != nullptr) {
        qhead_ = trail_.size();
        return conflict;
      }
    }
    return nullptr;
  }

  void bump_var(int v) {
    activity_[static_cast<size_t>(v)] += var_inc_;
    if (activity_[static_cast<size_t>(v)] > 1e100) {
      for (int u = 0; u < n_; ++u) activity_[static_cast<size_t>(u)] *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[static_cast<size_t>(v)] >= 0) heap_up(heap_pos_[static_cast<size_t>(v)]);
  }

  void bump_clause(Clause* c) {
    c->act += cla_inc_;
    if (c->act > 1e20) {
      for (Clause* l : learnts_) l->act *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  void analyze(Clause* conflict, std::vector<int>& learnt, int& bt_level) {
    learnt.assign(1, 0);
    int path = 0;
    int p = -1;
    int index = static_cast<int>(trail_.size()) - 1;
    Clause* c = conflict;
    do {
      bump_clause(c);
      for (size_t j = (p < 0 ? 0 : 1); j < c->lits.size(); ++j) {
        const int q = c->lits[j];
        const int v = var_of(q);
        if (!seen_[static_cast<size_t>(v)] && level_[static_cast<size_t>(v)] > 0) {
          seen_[static_cast<size_t>(v)] = true;
          bump_var(v);
          if (level_[static_cast<size_t>(v)] >= decision_level())
            ++path;
          else
            learnt.push_back(q);
        }
      }
      while (!seen_[static_cast<size_t>(var_of(trail_[static_cast<size_t>(index)]))]) --index;
      p = trail_[static_cast<size_t>(index)];
      --index;
      c = reason_[static_cast<size_t>(var_of(p))];
      seen_[static_cast<size_t>(var_of(p))] = false;
      --path;
    } while (path > 0);
    learnt[0] = p ^ 1;

    if (learnt.size() == 1) {
      bt_level = 0;
    } else {
      size_t max_i = 1;
      for (size_t i = 2; i < learnt.size(); ++i)
        if (level_[static_cast<size_t>(var_of(learnt[i]))] >
            level_[static_cast<size_t>(var_of(learnt[max_i]))])
          max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      bt_level = level_[static_cast<size_t>(var_of(learnt[1]))];
    }
    for (size_t i = 1; i < learnt.size(); ++i)
      seen_[static_cast<size_t>(var_of(learnt[i]))] = false;
  }

  void backtrack(int target) {
    if (decision_level() <= target) return;
    const int bound = trail_lim_[static_cast<size_t>(target)];
    for (int i = static_cast<int>(trail_.size()) - 1; i >= bound; --i) {
      const int v = var_of(trail_[static_cast<size_t>(i)]);
      value_[static_cast<size_t>(v)] = kUndef;
      reason_[static_cast<size_t>(v)] = nullptr;
      if (heap_pos_[static_cast<size_t>(v)] < 0) heap_insert(v);
    }
    trail_.resize(static_cast<size_t>(bound));
    trail_lim_.resize(static_cast<size_t>(target));
    qhead_ = trail_.size();
  }

  int pick_branch() {
    while (!heap_.empty()) {
      const int v = heap_[0];
      heap_remove_top();
      if (value_[static_cast<size_t>(v)] == kUndef) return v;
    }
    return -1;
  }

  void reduce_db() {
    // Drop the less active half of the learnt clauses, keeping binary clauses
    // and clauses that are the reason for a current assignment.
    std::vector<Clause*> sorted = learnts_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Clause* a, const Clause* b) { return a->act < b->act; });
    std::vector<Clause*> keep;
    size_t removed = 0;
    const size_t goal = sorted.size() / 2;
    for (Clause* c : sorted) {
      const bool locked = reason_[static_cast<size_t>(var_of(c->lits[0]))] == c &&
                          lit_value(c->lits[0]) == kTrue;
      if (removed < goal && c->lits.size() > 2 && !locked) {
        detach(c);
        delete_clause(c);
        ++removed;
      } else {
        keep.push_back(c);
      }
    }
    learnts_ = std::move(keep);
  }

  static long luby(long x) {
    // Luby sequence 1,1,2,1,1,2,4,... (x is the 0-based restart number)
    long size = 1, seq = 0;
    while (size < x + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x = x % size;
    }
    return 1L << seq;
  }

  // heap helpers ------------------------------------------------------------
  bool heap_less(int a, int b) const {
    const double xa = activity_[static_cast<size_t>(a)], xb = activity_[static_cast<size_t>(b)];
    if (xa != xb) return xa > xb;  // max-heap on activity
    return a < b;                  // deterministic tie-break
  }
  void heap_up(int i) {
    const int v = heap_[static_cast<size_t>(i)];
    while (i > 0) {
      const int parent = (i - 1) / 2;
      if (!heap_less(v, heap_[static_cast<size_t>(parent)])) break;
      heap_[static_cast<size_t>(i)] = heap_[static_cast<size_t>(parent)];
      heap_pos_[static_cast<size_t>(heap_[static_cast<size_t>(i)])] = i;
      i = parent;
    }
    heap_[static_cast<size_t>(i)] = v;
    heap_pos_[static_cast<size_t>(v)] = i;
  }
  void heap_down(int i) {
    const int v = heap_[static_cast<size_t>(i)];
    const int sz = static_cast<int>(heap_.size());
    while (true) {
      int child = 2 * i + 1;
      if (child >= sz) break;
      if (child + 1 < sz &&
          heap_less(heap_[static_cast<size_t>(child + 1)], heap_[static_cast<size_t>(child)]))
        ++child;
      if (!heap_less(heap_[static_cast<size_t>(child)], v)) break;
      heap_[static_cast<size_t>(i)] = heap_[static_cast<size_t>(child)];
      heap_pos_[static_cast<size_t>(heap_[static_cast<size_t>(i)])] = i;
      i = child;
    }
    heap_[static_cast<size_t>(i)] = v;
    heap_pos_[static_cast<size_t>(v)] = i;
  }
  void heap_insert(int v) {
    heap_.push_back(v);
    heap_up(static_cast<int>(heap_.size()) - 1);
  }
  void heap_remove_top() {
    const int last = heap_.back();
    heap_pos_[static_cast<size_t>(heap_[0])] = -1;
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_pos_[static_cast<size_t>(last)] = 0;
      heap_down(0);
    }
  }
};

}  // namespace

SolveResult solve_embedded(const CnfInstance& cnf, double timeout_sec) {
  Cdcl solver(cnf.num_vars, cnf.clauses);
  const int status = solver.solve(timeout_sec);
  SolveResult res;
  if (status == 1) {
    res.status = SolveStatus::Sat;
    res.model.value = solver.model();
  } else if (status == 0) {
    res.status = SolveStatus::Unsat;
  } else {
    res.status = SolveStatus::Unknown;
    res.info = "embedded solver hit the timeout after " +
               std::to_string(solver.conflicts()) + " conflicts";
  }
  return res;
}

}  // namespace certsynt::internal
