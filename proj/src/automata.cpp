#include "certsynt/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <tuple>

#include "certsynt/common.hpp"

namespace certsynt {

// ---------------------------------------------------------------------------
// Cube guards
// ---------------------------------------------------------------------------

bool CubeGuard::sat_by(const Letter& l) const {
  for (const auto& [atom, pol] : lits)
    if ((l.count(atom) > 0) != pol) return false;
  return true;
}

bool CubeGuard::sat_by_partial(const Letter& l, const std::set<std::string>& determined) const {
  for (const auto& [atom, pol] : lits) {
    if (!determined.count(atom)) continue;
    if ((l.count(atom) > 0) != pol) return false;
  }
  return true;
}

std::string CubeGuard::key() const {
  if (lits.empty()) return "1";
  std::string out;
  for (const auto& [atom, pol] : lits) {
    if (!out.empty()) out += "&";
    if (!pol) out += "!";
    out += atom;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Negation normal form over the tableau core
// ---------------------------------------------------------------------------

namespace {

enum class NnfKind { True, False, Lit, And, Or, Next, Until, Release };

struct NnfCtx {
  struct Node {
    NnfKind kind;
    std::string atom;  // Lit only
    bool neg = false;  // Lit only
    int left = -1, right = -1;
  };
  std::vector<Node> nodes;
  std::map<std::tuple<int, std::string, bool, int, int>, int> memo;

  int mk(NnfKind k, std::string atom = "", bool neg = false, int l = -1, int r = -1) {
    auto key = std::make_tuple(static_cast<int>(k), atom, neg, l, r);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({k, std::move(atom), neg, l, r});
    memo[key] = id;
    return id;
  }
  const Node& at(int id) const { return nodes[static_cast<size_t>(id)]; }
};

int to_nnf(NnfCtx& ctx, const FormulaPtr& f, bool positive) {
  switch (f->kind) {
    case LtlKind::Atom:
      return ctx.mk(NnfKind::Lit, f->atom, !positive);
    case LtlKind::True:
      return ctx.mk(positive ? NnfKind::True : NnfKind::False);
    case LtlKind::False:
      return ctx.mk(positive ? NnfKind::False : NnfKind::True);
    case LtlKind::Not:
      return to_nnf(ctx, f->children[0], !positive);
    case LtlKind::And: {
      const int l = to_nnf(ctx, f->children[0], positive);
      const int r = to_nnf(ctx, f->children[1], positive);
      return ctx.mk(positive ? NnfKind::And : NnfKind::Or, "", false, l, r);
    }
    case LtlKind::Or: {
      const int l = to_nnf(ctx, f->children[0], positive);
      const int r = to_nnf(ctx, f->children[1], positive);
      return ctx.mk(positive ? NnfKind::Or : NnfKind::And, "", false, l, r);
    }
    case LtlKind::Implies: {
      const int l = to_nnf(ctx, f->children[0], !positive);
      const int r = to_nnf(ctx, f->children[1], positive);
      return ctx.mk(positive ? NnfKind::Or : NnfKind::And, "", false, l, r);
    }
    case LtlKind::Next:
      return ctx.mk(NnfKind::Next, "", false, to_nnf(ctx, f->children[0], positive));
    case LtlKind::Until: {
      const int l = to_nnf(ctx, f->children[0], positive);
      const int r = to_nnf(ctx, f->children[1], positive);
      return ctx.mk(positive ? NnfKind::Until : NnfKind::Release, "", false, l, r);
    }
    case LtlKind::Eventually: {
      const int c = to_nnf(ctx, f->children[0], positive);
      if (positive) return ctx.mk(NnfKind::Until, "", false, ctx.mk(NnfKind::True), c);
      return ctx.mk(NnfKind::Release, "", false, ctx.mk(NnfKind::False), c);
    }
    case LtlKind::Globally: {
      const int c = to_nnf(ctx, f->children[0], positive);
      if (positive) return ctx.mk(NnfKind::Release, "", false, ctx.mk(NnfKind::False), c);
      return ctx.mk(NnfKind::Until, "", false, ctx.mk(NnfKind::True), c);
    }
  }
  throw std::logic_error("to_nnf: unhandled formula kind");
}

// ---------------------------------------------------------------------------
// Tableau expansion (on-the-fly node construction)
// ---------------------------------------------------------------------------

struct TableauNode {
  int name;
  std::set<int> incoming;  // names of predecessors; -1 stands for "initial"
  std::set<int> news, olds, nexts;
};

struct Tableau {
  NnfCtx& ctx;
  int state_cap;
  int next_name = 0;
  std::vector<TableauNode> done;
  std::map<std::pair<std::set<int>, std::set<int>>, size_t> done_index;  // (olds, nexts)
  std::deque<TableauNode> work;

  explicit Tableau(NnfCtx& c, int cap) : ctx(c), state_cap(cap) {}

  int negated_lit(int id) const {
    // Only valid for Lit nodes; returns -1 if the negation was never built.
    const auto& n = ctx.at(id);
    auto key = std::make_tuple(static_cast<int>(NnfKind::Lit), n.atom, !n.neg, -1, -1);
    auto it = ctx.memo.find(key);
    return it == ctx.memo.end() ? -1 : it->second;
  }

  void close(TableauNode node) {
    auto key = std::make_pair(node.olds, node.nexts);
    auto it = done_index.find(key);
    if (it != done_index.end()) {
      auto& inc = done[it->second].incoming;
      inc.insert(node.incoming.begin(), node.incoming.end());
      return;
    }
    if (static_cast<int>(done.size()) >= state_cap)
      throw ResourceError("automaton construction exceeded the state cap");
    done_index[key] = done.size();
    done.push_back(node);
    TableauNode succ;
    succ.name = next_name++;
    succ.incoming = {node.name};
    succ.news = node.nexts;
    work.push_back(std::move(succ));
  }

  void run(int root) {
    TableauNode init;
    init.name = next_name++;
    init.incoming = {-1};
    init.news = {root};
    work.push_back(std::move(init));

    while (!work.empty()) {
      TableauNode node = std::move(work.front());
      work.pop_front();
      bool dropped = false;
      while (!node.news.empty() && !dropped) {
        const int eta = *node.news.begin();
        node.news.erase(node.news.begin());
        if (node.olds.count(eta)) continue;
        const auto& n = ctx.at(eta);
        switch (n.kind) {
          case NnfKind::True:
            // Recorded although vacuous: until-acceptance below asks whether
            // the right operand is in olds, and that operand may be True.
            node.olds.insert(eta);
            break;
          case NnfKind::False:
            dropped = true;
            break;
          case NnfKind::Lit: {
            const int neg = negated_lit(eta);
            if (neg >= 0 && node.olds.count(neg)) {
              dropped = true;
              break;
            }
            node.olds.insert(eta);
            break;
          }
          case NnfKind::And:
            node.olds.insert(eta);
            if (!node.olds.count(n.left)) node.news.insert(n.left);
            if (!node.olds.count(n.right)) node.news.insert(n.right);
            break;
          case NnfKind::Next:
            node.olds.insert(eta);
            node.nexts.insert(n.left);
            break;
          case NnfKind::Or: {
            TableauNode other = node;
            other.name = next_name++;
            node.name = next_name++;
            node.olds.insert(eta);
            other.olds.insert(eta);
            if (!node.olds.count(n.left)) node.news.insert(n.left);
            if (!other.olds.count(n.right)) other.news.insert(n.right);
            work.push_back(std::move(other));
            break;
          }
          case NnfKind::Until: {
            TableauNode other = node;
            other.name = next_name++;
            node.name = next_name++;
            node.olds.insert(eta);
            other.olds.insert(eta);
            if (!node.olds.count(n.left)) node.news.insert(n.left);
            node.nexts.insert(eta);
            if (!other.olds.count(n.right)) other.news.insert(n.right);
            work.push_back(std::move(other));
            break;
          }
          case NnfKind::Release: {
            TableauNode other = node;
            other.name = next_name++;
            node.name = next_name++;
            node.olds.insert(eta);
            other.olds.insert(eta);
            if (!node.olds.count(n.right)) node.news.insert(n.right);
            node.nexts.insert(eta);
            if (!other.olds.count(n.left)) other.news.insert(n.left);
            if (!other.olds.count(n.right)) other.news.insert(n.right);
            work.push_back(std::move(other));
            break;
          }
        }
      }
      if (!dropped) close(std::move(node));
    }
  }
};

CubeGuard guard_of(const NnfCtx& ctx, const std::set<int>& olds) {
  CubeGuard g;
  for (int id : olds) {
    const auto& n = ctx.at(id);
    if (n.kind == NnfKind::Lit) g.lits[n.atom] = !n.neg;
  }
  return g;
}

// ---------------------------------------------------------------------------
// SCC decomposition (iterative Tarjan) shared by trimming and run graphs
// ---------------------------------------------------------------------------

struct SccResult {
  std::vector<int> comp;     // node -> component id (reverse topological order)
  int count = 0;
  std::vector<bool> cyclic;  // component has >= 2 nodes or a self-loop
};

SccResult tarjan_scc(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  SccResult res;
  res.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;

  struct Frame {
    int v;
    size_t child = 0;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.child < adj[f.v].size()) {
        const int w = adj[f.v][f.child++];
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        const int v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        if (low[v] == index[v]) {
          const int c = res.count++;
          int size = 0;
          while (true) {
            const int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            res.comp[w] = c;
            ++size;
            if (w == v) break;
          }
          bool cyc = size > 1;
          if (!cyc)
            for (int w : adj[v])
              if (w == v) cyc = true;
          res.cyclic.push_back(cyc);
        }
      }
    }
  }
  return res;
}

std::vector<std::vector<int>> adjacency(const Nba& a) {
  std::vector<std::vector<int>> adj(static_cast<size_t>(a.num_states()));
  for (const auto& bucket : a.trans)
    for (const auto& t : bucket) adj[static_cast<size_t>(t.from)].push_back(t.to);
  return adj;
}

// Remove states that are unreachable or cannot contribute to an accepting
// run; the initial state is always kept so the automaton stays well-formed.
Nba trim(const Nba& a) {
  const int n = a.num_states();
  std::vector<bool> reach(static_cast<size_t>(n), false);
  std::deque<int> todo{a.initial};
  reach[static_cast<size_t>(a.initial)] = true;
  auto adj = adjacency(a);
  while (!todo.empty()) {
    const int v = todo.front();
    todo.pop_front();
    for (int w : adj[static_cast<size_t>(v)])
      if (!reach[static_cast<size_t>(w)]) {
        reach[static_cast<size_t>(w)] = true;
        todo.push_back(w);
      }
  }

  auto scc = tarjan_scc(adj);
  // A component is fair if it is cyclic and contains an accepting state;
  // productive states reach a fair component.
  std::vector<bool> fair(static_cast<size_t>(scc.count), false);
  for (int v = 0; v < n; ++v)
    if (a.accepting[static_cast<size_t>(v)] && scc.cyclic[static_cast<size_t>(scc.comp[v])])
      fair[static_cast<size_t>(scc.comp[v])] = true;
  // Tarjan numbers components in reverse topological order: a component's
  // successors have smaller ids, so one ascending sweep suffices.
  std::vector<bool> productive_comp = fair;
  std::vector<std::vector<int>> comp_succ(static_cast<size_t>(scc.count));
  for (int v = 0; v < n; ++v)
    for (int w : adj[static_cast<size_t>(v)])
      if (scc.comp[v] != scc.comp[w])
        comp_succ[static_cast<size_t>(scc.comp[v])].push_back(scc.comp[w]);
  for (int c = 0; c < scc.count; ++c)
    for (int d : comp_succ[static_cast<size_t>(c)])
      if (productive_comp[static_cast<size_t>(d)]) productive_comp[static_cast<size_t>(c)] = true;

  std::vector<int> remap(static_cast<size_t>(n), -1);
  Nba out;
  out.alphabet = a.alphabet;
  for (int v = 0; v < n; ++v) {
    const bool keep =
        v == a.initial ||
        (reach[static_cast<size_t>(v)] && productive_comp[static_cast<size_t>(scc.comp[v])]);
    if (!keep) continue;
    remap[static_cast<size_t>(v)] = static_cast<int>(out.accepting.size());
    out.accepting.push_back(a.accepting[static_cast<size_t>(v)]);
  }
  out.initial = remap[static_cast<size_t>(a.initial)];
  out.trans.assign(out.accepting.size(), {});
  for (const auto& bucket : a.trans)
    for (const auto& t : bucket) {
      const int f = remap[static_cast<size_t>(t.from)];
      const int g = remap[static_cast<size_t>(t.to)];
      if (f >= 0 && g >= 0) out.trans[static_cast<size_t>(f)].push_back({f, t.guard, g});
    }
  return out;
}

// Quotient by the coarsest partition in which merged states agree on
// acceptance and have identical outgoing (guard, class) signatures.
Nba quotient(const Nba& a) {
  const int n = a.num_states();
  if (n == 0) return a;
  std::vector<int> cls(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) cls[static_cast<size_t>(v)] = a.accepting[static_cast<size_t>(v)] ? 1 : 0;

  while (true) {
    std::map<std::pair<int, std::set<std::pair<std::string, int>>>, int> sig_to_class;
    std::vector<int> next(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
      std::set<std::pair<std::string, int>> sig;
      for (const auto& t : a.trans[static_cast<size_t>(v)])
        sig.insert({t.guard.key(), cls[static_cast<size_t>(t.to)]});
      auto key = std::make_pair(cls[static_cast<size_t>(v)], std::move(sig));
      auto it = sig_to_class.find(key);
      if (it == sig_to_class.end())
        it = sig_to_class.emplace(std::move(key), static_cast<int>(sig_to_class.size())).first;
      next[static_cast<size_t>(v)] = it->second;
    }
    const bool stable =
        std::set<int>(cls.begin(), cls.end()).size() == sig_to_class.size() && [&] {
          // Same number of classes and a refinement => identical partition.
          std::map<int, int> seen;
          for (int v = 0; v < n; ++v) {
            auto it = seen.find(cls[static_cast<size_t>(v)]);
            if (it == seen.end())
              seen[cls[static_cast<size_t>(v)]] = next[static_cast<size_t>(v)];
            else if (it->second != next[static_cast<size_t>(v)])
              return false;
          }
          return true;
        }();
    cls = std::move(next);
    if (stable) break;
  }

  const int k = 1 + *std::max_element(cls.begin(), cls.end());
  Nba out;
  out.alphabet = a.alphabet;
  out.accepting.assign(static_cast<size_t>(k), false);
  out.trans.assign(static_cast<size_t>(k), {});
  out.initial = cls[static_cast<size_t>(a.initial)];
  std::vector<std::set<std::pair<std::string, int>>> seen(static_cast<size_t>(k));
  for (int v = 0; v < n; ++v) {
    const int c = cls[static_cast<size_t>(v)];
    if (a.accepting[static_cast<size_t>(v)]) out.accepting[static_cast<size_t>(c)] = true;
    for (const auto& t : a.trans[static_cast<size_t>(v)]) {
      const int d = cls[static_cast<size_t>(t.to)];
      if (seen[static_cast<size_t>(c)].insert({t.guard.key(), d}).second)
        out.trans[static_cast<size_t>(c)].push_back({c, t.guard, d});
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LTL -> NBA
// ---------------------------------------------------------------------------

Nba ltl_to_nba(const FormulaPtr& f, const std::set<std::string>& alphabet, int state_cap) {
  if (!f) throw InvalidInput("ltl_to_nba: null formula");
  NnfCtx ctx;
  const int root = to_nnf(ctx, f, true);

  Tableau tab(ctx, state_cap);
  tab.run(root);

  // Generalized acceptance: one set per until formula that actually occurs.
  std::set<int> untils;
  for (const auto& node : tab.done)
    for (int id : node.olds)
      if (ctx.at(id).kind == NnfKind::Until) untils.insert(id);
  const std::vector<int> until_list(untils.begin(), untils.end());
  const int k = static_cast<int>(until_list.size());

  // Map tableau names to dense indices; index 0 is a fresh initial state.
  std::map<int, int> name_to_idx;
  for (size_t i = 0; i < tab.done.size(); ++i) name_to_idx[tab.done[i].name] = static_cast<int>(i);

  const int base = static_cast<int>(tab.done.size()) + 1;  // tableau states + initial
  auto in_fset = [&](int done_idx, int fi) {
    const auto& olds = tab.done[static_cast<size_t>(done_idx)].olds;
    const int psi = until_list[static_cast<size_t>(fi)];
    return !olds.count(psi) || olds.count(ctx.at(psi).right);
  };

  Nba nba;
  nba.alphabet = alphabet;
  for (const auto& atom : atomic_props(f)) nba.alphabet.insert(atom);
  const int layers = std::max(k, 1);
  const long total = static_cast<long>(base) * layers;
  if (total > state_cap)
    throw ResourceError("automaton construction exceeded the state cap");
  nba.accepting.assign(static_cast<size_t>(total), false);
  nba.trans.assign(static_cast<size_t>(total), {});
  auto idx = [&](int state, int layer) { return state + layer * base; };  // state 0 = initial
  nba.initial = idx(0, 0);

  for (size_t qi = 0; qi < tab.done.size(); ++qi) {
    const auto& q = tab.done[qi];
    const CubeGuard g = guard_of(ctx, q.olds);
    const int qs = static_cast<int>(qi) + 1;
    for (int pre : q.incoming) {
      const int ps = pre < 0 ? 0 : name_to_idx.at(pre) + 1;
      for (int layer = 0; layer < layers; ++layer) {
        int nl = layer;
        if (k > 0 && ps > 0 && in_fset(ps - 1, layer)) nl = (layer + 1) % k;
        const int from = idx(ps, layer);
        nba.trans[static_cast<size_t>(from)].push_back({from, g, idx(qs, nl)});
      }
    }
  }
  if (k == 0) {
    nba.accepting.assign(nba.accepting.size(), true);
  } else {
    for (size_t qi = 0; qi < tab.done.size(); ++qi)
      if (in_fset(static_cast<int>(qi), 0))
        nba.accepting[static_cast<size_t>(idx(static_cast<int>(qi) + 1, 0))] = true;
  }

  return quotient(trim(nba));
}

UniversalCoBuchi nba_to_uca(const Nba& nba_of_negation) {
  UniversalCoBuchi uca;
  uca.alphabet = nba_of_negation.alphabet;
  uca.initial = nba_of_negation.initial;
  uca.rejecting = nba_of_negation.accepting;
  uca.trans = nba_of_negation.trans;
  return uca;
}

UniversalCoBuchi ltl_to_uca(const FormulaPtr& f, const std::set<std::string>& alphabet,
                            int state_cap) {
  return nba_to_uca(ltl_to_nba(ltl::mk_not(f), alphabet, state_cap));
}

// ---------------------------------------------------------------------------
// Lasso membership
// ---------------------------------------------------------------------------

namespace {

// Product of an automaton graph with the lasso's position structure.
// Returns adjacency plus the flag vector marked[(pos,state)] for states in
// `marked_states`.
struct LassoProduct {
  std::vector<std::vector<int>> adj;
  std::vector<bool> marked;
  std::vector<bool> reach;
  int nodes = 0;
  int width = 0;  // number of automaton states
};

template <typename Automaton>
LassoProduct lasso_product(const Automaton& a, const std::vector<bool>& marked_states,
                           const Trace& stem, const Trace& loop) {
  if (loop.empty()) throw InvalidInput("lasso membership: empty loop");
  const int len = static_cast<int>(stem.size() + loop.size());
  const int w = a.num_states();
  LassoProduct p;
  p.width = w;
  p.nodes = len * w;
  p.adj.assign(static_cast<size_t>(p.nodes), {});
  p.marked.assign(static_cast<size_t>(p.nodes), false);
  p.reach.assign(static_cast<size_t>(p.nodes), false);
  auto letter_at = [&](int pos) -> const Letter& {
    return pos < static_cast<int>(stem.size())
               ? stem[static_cast<size_t>(pos)]
               : loop[static_cast<size_t>(pos - static_cast<int>(stem.size()))];
  };
  auto node = [&](int pos, int q) { return pos * w + q; };
  for (int pos = 0; pos < len; ++pos) {
    const int nxt = pos + 1 < len ? pos + 1 : static_cast<int>(stem.size());
    for (int q = 0; q < w; ++q) {
      if (marked_states[static_cast<size_t>(q)]) p.marked[static_cast<size_t>(node(pos, q))] = true;
      for (const auto& t : a.trans[static_cast<size_t>(q)])
        if (t.guard.sat_by(letter_at(pos)))
          p.adj[static_cast<size_t>(node(pos, q))].push_back(node(nxt, t.to));
    }
  }
  std::deque<int> todo{node(0, a.initial)};
  p.reach[static_cast<size_t>(node(0, a.initial))] = true;
  while (!todo.empty()) {
    const int v = todo.front();
    todo.pop_front();
    for (int u : p.adj[static_cast<size_t>(v)])
      if (!p.reach[static_cast<size_t>(u)]) {
        p.reach[static_cast<size_t>(u)] = true;
        todo.push_back(u);
      }
  }
  return p;
}

bool has_reachable_marked_cycle(const LassoProduct& p) {
  auto scc = tarjan_scc(p.adj);
  for (int v = 0; v < p.nodes; ++v)
    if (p.reach[static_cast<size_t>(v)] && p.marked[static_cast<size_t>(v)] &&
        scc.cyclic[static_cast<size_t>(scc.comp[v])])
      return true;
  return false;
}

}  // namespace

bool nba_accepts_lasso(const Nba& nba, const Trace& stem, const Trace& loop) {
  if (nba.num_states() == 0) return false;
  return has_reachable_marked_cycle(lasso_product(nba, nba.accepting, stem, loop));
}

bool uca_accepts_lasso(const UniversalCoBuchi& uca, const Trace& stem, const Trace& loop) {
  if (uca.num_states() == 0) return true;
  return !has_reachable_marked_cycle(lasso_product(uca, uca.rejecting, stem, loop));
}

// ---------------------------------------------------------------------------
// Run graph
// ---------------------------------------------------------------------------

RunGraph build_run_graph(const Machine& ts, const UniversalCoBuchi& uca) {
  std::set<std::string> determined(ts.inputs.begin(), ts.inputs.end());
  determined.insert(ts.outputs.begin(), ts.outputs.end());

  RunGraph rg;
  std::map<std::pair<int, int>, int> index;
  std::deque<std::pair<int, int>> todo;
  auto node_of = [&](int t, int q) {
    auto it = index.find({t, q});
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(rg.nodes.size());
    index[{t, q}] = id;
    rg.nodes.push_back({t, q, uca.rejecting[static_cast<size_t>(q)]});
    rg.edges.emplace_back();
    todo.push_back({t, q});
    return id;
  };
  rg.initial = node_of(ts.initial, uca.initial);

  while (!todo.empty()) {
    auto [t, q] = todo.front();
    todo.pop_front();
    const int id = index.at({t, q});
    std::set<int> seen_targets;
    for (uint32_t c = 0; c < ts.cube_count(); ++c) {
      const int nt = ts.states[static_cast<size_t>(t)].succ[c];
      if (nt < 0) continue;
      Letter letter = ts.cube_to_letter(c);
      const Letter lab = ts.label_letter(t, c);
      letter.insert(lab.begin(), lab.end());
      for (const auto& tr : uca.trans[static_cast<size_t>(q)]) {
        if (!tr.guard.sat_by_partial(letter, determined)) continue;
        const int target = node_of(nt, tr.to);
        if (!seen_targets.insert(target).second) continue;
        Letter witness = letter;
        for (const auto& [atom, pol] : tr.guard.lits)
          if (pol && !determined.count(atom)) witness.insert(atom);
        rg.edges[static_cast<size_t>(id)].push_back({target, std::move(witness)});
      }
    }
  }
  return rg;
}

// ---------------------------------------------------------------------------
// Valid annotations and counterexamples
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<int>> adjacency(const RunGraph& rg) {
  std::vector<std::vector<int>> adj(rg.nodes.size());
  for (size_t v = 0; v < rg.nodes.size(); ++v)
    for (const auto& e : rg.edges[v]) adj[v].push_back(e.target);
  return adj;
}

}  // namespace

namespace {

std::vector<bool> reachable(const RunGraph& rg, const std::vector<std::vector<int>>& adj) {
  std::vector<bool> reach(rg.nodes.size(), false);
  std::deque<int> todo{rg.initial};
  reach[static_cast<size_t>(rg.initial)] = true;
  while (!todo.empty()) {
    const int v = todo.front();
    todo.pop_front();
    for (int w : adj[static_cast<size_t>(v)])
      if (!reach[static_cast<size_t>(w)]) {
        reach[static_cast<size_t>(w)] = true;
        todo.push_back(w);
      }
  }
  return reach;
}

}  // namespace

std::optional<Annotation> find_valid_annotation(const RunGraph& rg) {
  if (rg.nodes.empty()) return Annotation{};
  auto adj = adjacency(rg);
  auto reach = reachable(rg, adj);
  auto scc = tarjan_scc(adj);
  for (size_t v = 0; v < rg.nodes.size(); ++v)
    if (reach[v] && rg.nodes[v].rejecting && scc.cyclic[static_cast<size_t>(scc.comp[v])])
      return std::nullopt;

  // Condensation is a DAG; Tarjan ids are in reverse topological order, so a
  // descending sweep visits every component before its successors. lambda is
  // constant on components (cycles cannot pass through rejecting nodes).
  std::vector<long> comp_val(static_cast<size_t>(scc.count), 0);
  Annotation lambda(rg.nodes.size(), -1);
  for (int c = scc.count - 1; c >= 0; --c) {
    const long base = comp_val[static_cast<size_t>(c)];
    for (size_t v = 0; v < rg.nodes.size(); ++v) {
      if (scc.comp[v] != c || !reach[v]) continue;
      lambda[v] = base + (rg.nodes[v].rejecting ? 1 : 0);
      for (int w : adj[v]) {
        const int d = scc.comp[static_cast<size_t>(w)];
        if (d != c)
          comp_val[static_cast<size_t>(d)] = std::max(comp_val[static_cast<size_t>(d)], lambda[v]);
      }
    }
  }
  return lambda;
}

std::optional<std::pair<Trace, Trace>> counterexample_lasso(const RunGraph& rg) {
  if (rg.nodes.empty()) return std::nullopt;
  auto adj = adjacency(rg);
  auto reach = reachable(rg, adj);
  auto scc = tarjan_scc(adj);
  int bad = -1;
  for (size_t v = 0; v < rg.nodes.size(); ++v)
    if (reach[v] && rg.nodes[v].rejecting && scc.cyclic[static_cast<size_t>(scc.comp[v])]) {
      bad = static_cast<int>(v);
      break;
    }
  if (bad < 0) return std::nullopt;

  auto bfs_path = [&](int from, int to, bool within_comp, bool at_least_one_edge) {
    // Returns the edge sequence of a shortest path; empty path allowed only
    // when not forcing an edge.
    std::vector<int> parent(rg.nodes.size(), -2);
    std::vector<const RunGraph::Edge*> via(rg.nodes.size(), nullptr);
    std::deque<int> todo;
    if (!at_least_one_edge && from == to) return std::vector<const RunGraph::Edge*>{};
    parent[static_cast<size_t>(from)] = -1;
    todo.push_back(from);
    std::optional<const RunGraph::Edge*> last;
    int last_pre = -1;
    while (!todo.empty()) {
      const int v = todo.front();
      todo.pop_front();
      for (const auto& e : rg.edges[static_cast<size_t>(v)]) {
        if (within_comp && scc.comp[static_cast<size_t>(e.target)] != scc.comp[static_cast<size_t>(from)])
          continue;
        if (e.target == to) {
          last = &e;
          last_pre = v;
          todo.clear();
          break;
        }
        if (parent[static_cast<size_t>(e.target)] != -2) continue;
        parent[static_cast<size_t>(e.target)] = v;
        via[static_cast<size_t>(e.target)] = &e;
        todo.push_back(e.target);
      }
      if (last) break;
    }
    std::vector<const RunGraph::Edge*> edges;
    if (!last) return edges;  // unreachable: caller guarantees this cannot happen
    edges.push_back(*last);
    for (int v = last_pre; v != from || edges.size() == 0;) {
      if (v == from) break;
      edges.push_back(via[static_cast<size_t>(v)]);
      v = parent[static_cast<size_t>(v)];
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
  };

  const auto stem_edges = bfs_path(rg.initial, bad, false, rg.initial != bad);
  const auto loop_edges = bfs_path(bad, bad, true, true);

  Trace stem, loop;
  for (const auto* e : stem_edges) stem.push_back(e->witness);
  for (const auto* e : loop_edges) loop.push_back(e->witness);
  return std::make_pair(std::move(stem), std::move(loop));
}

// ---------------------------------------------------------------------------
// DOT rendering
// ---------------------------------------------------------------------------

namespace {

std::string dot_graph(int n, int initial, const std::vector<std::string>& labels,
                      const std::vector<bool>& doubled,
                      const std::vector<std::vector<std::pair<int, std::string>>>& edges) {
  std::ostringstream os;
  os << "digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n";
  os << "  init [shape=point];\n";
  for (int v = 0; v < n; ++v) {
    os << "  s" << v << " [label=\"" << labels[static_cast<size_t>(v)] << "\"";
    if (doubled[static_cast<size_t>(v)]) os << ", shape=doublecircle";
    os << "];\n";
  }
  os << "  init -> s" << initial << ";\n";
  for (int v = 0; v < n; ++v)
    for (const auto& [to, lab] : edges[static_cast<size_t>(v)])
      os << "  s" << v << " -> s" << to << " [label=\"" << lab << "\"];\n";
  os << "}\n";
  return os.str();
}

template <typename Automaton>
std::string automaton_dot(const Automaton& a, const std::vector<bool>& doubled) {
  std::vector<std::string> labels;
  for (int v = 0; v < a.num_states(); ++v) labels.push_back("q" + std::to_string(v));
  std::vector<std::vector<std::pair<int, std::string>>> edges(
      static_cast<size_t>(a.num_states()));
  for (const auto& bucket : a.trans)
    for (const auto& t : bucket)
      edges[static_cast<size_t>(t.from)].push_back({t.to, t.guard.key()});
  return dot_graph(a.num_states(), a.initial, labels, doubled, edges);
}

std::string letter_text(const Letter& l) {
  std::string out = "{";
  for (const auto& v : l) {
    if (out.size() > 1) out += ",";
    out += v;
  }
  return out + "}";
}

}  // namespace

std::string to_dot(const Nba& nba) { return automaton_dot(nba, nba.accepting); }

std::string to_dot(const UniversalCoBuchi& uca) { return automaton_dot(uca, uca.rejecting); }

std::string to_dot(const RunGraph& rg) {
  std::vector<std::string> labels;
  std::vector<bool> doubled;
  for (const auto& n : rg.nodes) {
    labels.push_back(std::to_string(n.ts_state) + "," + std::to_string(n.uca_state));
    doubled.push_back(n.rejecting);
  }
  std::vector<std::vector<std::pair<int, std::string>>> edges(rg.nodes.size());
  for (size_t v = 0; v < rg.nodes.size(); ++v)
    for (const auto& e : rg.edges[v]) edges[v].push_back({e.target, letter_text(e.witness)});
  return dot_graph(static_cast<int>(rg.nodes.size()), rg.initial, labels, doubled, edges);
}

}  // namespace certsynt
