#include "certsynt/machine.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace certsynt {

namespace {

std::vector<std::string> sorted_union(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
  std::set<std::string> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

Letter intersect(const Letter& l, const std::vector<std::string>& vars) {
  Letter out;
  for (const auto& v : vars)
    if (l.count(v)) out.insert(v);
  return out;
}

}  // namespace

uint32_t Machine::letter_to_cube(const Letter& l) const {
  uint32_t cube = 0;
  for (size_t k = 0; k < inputs.size(); ++k)
    if (l.count(inputs[k])) cube |= (1u << k);
  return cube;
}

Letter Machine::cube_to_letter(uint32_t cube) const {
  Letter l;
  for (size_t k = 0; k < inputs.size(); ++k)
    if (cube & (1u << k)) l.insert(inputs[k]);
  return l;
}

uint32_t Machine::output_mask(const Letter& l) const {
  uint32_t m = 0;
  for (size_t k = 0; k < outputs.size(); ++k)
    if (l.count(outputs[k])) m |= (1u << k);
  return m;
}

Letter Machine::mask_to_letter(uint32_t mask) const {
  Letter l;
  for (size_t k = 0; k < outputs.size(); ++k)
    if (mask & (1u << k)) l.insert(outputs[k]);
  return l;
}

uint32_t Machine::label_mask(int state, uint32_t cube) const {
  const State& s = states[static_cast<size_t>(state)];
  return mealy ? s.out[cube] : s.label;
}

Letter Machine::label_letter(int state, uint32_t cube) const {
  return mask_to_letter(label_mask(state, cube));
}

bool Machine::is_total() const {
  for (const auto& s : states)
    for (int t : s.succ)
      if (t < 0) return false;
  return true;
}

Machine::State& Machine::add_state(std::string name, uint32_t label) {
  State s;
  s.name = std::move(name);
  s.label = label;
  s.succ.assign(cube_count(), -1);
  if (mealy) s.out.assign(cube_count(), 0);
  states.push_back(std::move(s));
  return states.back();
}

bool same_behaviour(const Machine& a, const Machine& b) {
  if (a.inputs != b.inputs || a.mealy != b.mealy) return false;
  std::set<std::string> oa(a.outputs.begin(), a.outputs.end());
  std::set<std::string> ob(b.outputs.begin(), b.outputs.end());
  if (oa != ob) return false;
  // Lock-step walk over defined inputs from the initial states.
  std::map<int, int> pairing{{a.initial, b.initial}};
  std::deque<std::pair<int, int>> todo{{a.initial, b.initial}};
  std::set<std::pair<int, int>> seen{{a.initial, b.initial}};
  while (!todo.empty()) {
    auto [sa, sb] = todo.front();
    todo.pop_front();
    for (uint32_t c = 0; c < a.cube_count(); ++c) {
      const int na = a.states[sa].succ[c];
      const int nb = b.states[sb].succ[c];
      if ((na < 0) != (nb < 0)) return false;
      if (a.label_letter(sa, c) != b.label_letter(sb, c)) return false;
      if (na < 0) continue;
      auto it = pairing.find(na);
      if (it != pairing.end() && it->second != nb) return false;
      pairing[na] = nb;
      if (seen.insert({na, nb}).second) todo.push_back({na, nb});
    }
  }
  return true;
}

Trace compute(const Machine& m, const Trace& input_trace) {
  Trace out;
  int state = m.initial;
  for (size_t k = 0; k < input_trace.size(); ++k) {
    const Letter in = intersect(input_trace[k], m.inputs);
    const uint32_t cube = m.letter_to_cube(in);
    Letter letter = in;
    const Letter lab = m.label_letter(state, cube);
    letter.insert(lab.begin(), lab.end());
    out.push_back(std::move(letter));
    if (k + 1 < input_trace.size()) {
      const int nxt = m.states[static_cast<size_t>(state)].succ[cube];
      if (nxt < 0) break;  // stuck: the next position never happens
      state = nxt;
    }
  }
  return out;
}

Machine parallel_compose(const Machine& a, const Machine& b) {
  if (a.mealy || b.mealy)
    throw InvalidInput("parallel_compose is defined for Moore machines only");
  for (const auto& o : a.outputs)
    if (std::count(b.outputs.begin(), b.outputs.end(), o))
      throw InvalidInput("parallel_compose: output '" + o + "' produced by both machines");

  Machine r;
  const std::vector<std::string> all_out = sorted_union(a.outputs, b.outputs);
  for (const auto& v : sorted_union(a.inputs, b.inputs))
    if (!std::count(all_out.begin(), all_out.end(), v)) r.inputs.push_back(v);
  r.outputs = all_out;

  std::map<std::pair<int, int>, int> index;
  std::deque<std::pair<int, int>> todo;
  auto state_of = [&](int sa, int sb) {
    auto it = index.find({sa, sb});
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(r.states.size());
    index[{sa, sb}] = id;
    Letter lab = a.label_letter(sa);
    const Letter lb = b.label_letter(sb);
    lab.insert(lb.begin(), lb.end());
    r.add_state(a.states[sa].name + "|" + b.states[sb].name, r.output_mask(lab));
    todo.push_back({sa, sb});
    return id;
  };
  r.initial = state_of(a.initial, b.initial);
  while (!todo.empty()) {
    auto [sa, sb] = todo.front();
    todo.pop_front();
    const int id = index.at({sa, sb});
    for (uint32_t c = 0; c < r.cube_count(); ++c) {
      Letter env = r.cube_to_letter(c);
      Letter for_a = env;
      const Letter lb = b.label_letter(sb);
      for_a.insert(lb.begin(), lb.end());
      Letter for_b = env;
      const Letter la = a.label_letter(sa);
      for_b.insert(la.begin(), la.end());
      const int na = a.states[sa].succ[a.letter_to_cube(for_a)];
      const int nb = b.states[sb].succ[b.letter_to_cube(for_b)];
      if (na < 0 || nb < 0) continue;
      r.states[id].succ[c] = state_of(na, nb);
    }
  }
  return r;
}

std::optional<std::set<std::pair<int, int>>> simulates(const Machine& abstract,
                                                       const Machine& concrete,
                                                       const std::set<std::string>& obs) {
  if (std::set<std::string>(abstract.inputs.begin(), abstract.inputs.end()) !=
      std::set<std::string>(concrete.inputs.begin(), concrete.inputs.end()))
    throw InvalidInput("simulates: machines must share their input variables");
  for (const auto& v : obs) {
    if (!std::count(abstract.outputs.begin(), abstract.outputs.end(), v) ||
        !std::count(concrete.outputs.begin(), concrete.outputs.end(), v))
      throw InvalidInput("simulates: observed variable '" + v + "' missing from a machine");
  }

  // Input cube translation: the machines may order shared inputs differently.
  std::vector<uint32_t> cube_map(concrete.cube_count());
  for (uint32_t c = 0; c < concrete.cube_count(); ++c)
    cube_map[c] = abstract.letter_to_cube(concrete.cube_to_letter(c));

  auto labels_ok = [&](int tc, int ta) {
    if (!concrete.mealy && !abstract.mealy)
      return intersect(concrete.label_letter(tc), {obs.begin(), obs.end()}) ==
             intersect(abstract.label_letter(ta), {obs.begin(), obs.end()});
    for (uint32_t c = 0; c < concrete.cube_count(); ++c) {
      if (intersect(concrete.label_letter(tc, c), {obs.begin(), obs.end()}) !=
          intersect(abstract.label_letter(ta, cube_map[c]), {obs.begin(), obs.end()}))
        return false;
    }
    return true;
  };

  const size_t nc = concrete.states.size(), na = abstract.states.size();
  std::vector<std::vector<bool>> rel(nc, std::vector<bool>(na, false));
  for (size_t tc = 0; tc < nc; ++tc)
    for (size_t ta = 0; ta < na; ++ta)
      rel[tc][ta] = labels_ok(static_cast<int>(tc), static_cast<int>(ta));

  // Greatest fixed point: drop pairs with an unmatched concrete transition.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t tc = 0; tc < nc; ++tc) {
      for (size_t ta = 0; ta < na; ++ta) {
        if (!rel[tc][ta]) continue;
        for (uint32_t c = 0; c < concrete.cube_count(); ++c) {
          const int ntc = concrete.states[tc].succ[c];
          if (ntc < 0) continue;
          const int nta = abstract.states[ta].succ[cube_map[c]];
          if (nta < 0 || !rel[ntc][nta]) {
            rel[tc][ta] = false;
            changed = true;
            break;
          }
        }
      }
    }
  }

  if (!rel[concrete.initial][abstract.initial]) return std::nullopt;
  std::set<std::pair<int, int>> out;
  for (size_t tc = 0; tc < nc; ++tc)
    for (size_t ta = 0; ta < na; ++ta)
      if (rel[tc][ta]) out.insert({static_cast<int>(tc), static_cast<int>(ta)});
  return out;
}

bool is_valid_history(const Trace& prefix, const std::vector<const Machine*>& guarantees) {
  for (const Machine* g : guarantees) {
    int state = g->initial;
    for (size_t k = 0; k < prefix.size(); ++k) {
      const uint32_t cube = g->letter_to_cube(intersect(prefix[k], g->inputs));
      if (intersect(prefix[k], g->outputs) != g->label_letter(state, cube)) return false;
      state = g->states[static_cast<size_t>(state)].succ[cube];
      if (state < 0) throw InvalidInput("is_valid_history: guarantee machine is not total");
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Restriction
// ---------------------------------------------------------------------------

Machine restrict_strategy(const Machine& s, const std::vector<Machine>& guarantees) {
  if (s.mealy) throw InvalidInput("restrict_strategy expects a Moore strategy");
  if (guarantees.empty()) return s;
  for (const auto& g : guarantees) {
    if (g.mealy || !g.is_total())
      throw InvalidInput("restrict_strategy: guarantees must be total Moore machines");
  }

  // Variables of guarantee inputs that nothing in sight determines: neither
  // the strategy's own interface nor any guarantee's outputs. They belong to
  // other processes or an unobserved part of the environment and may be
  // completed freely, which makes the tracked guarantee states a *set* of
  // profiles rather than a single one.
  std::set<std::string> determined(s.inputs.begin(), s.inputs.end());
  determined.insert(s.outputs.begin(), s.outputs.end());
  for (const auto& g : guarantees) determined.insert(g.outputs.begin(), g.outputs.end());
  std::set<std::string> free_vars;
  for (const auto& g : guarantees)
    for (const auto& v : g.inputs)
      if (!determined.count(v)) free_vars.insert(v);
  if (free_vars.size() > 12)
    throw ResourceError("restrict_strategy: too many unobservable guarantee inputs");
  const std::vector<std::string> free_list(free_vars.begin(), free_vars.end());

  using Profile = std::vector<int>;
  using ProfileSet = std::set<Profile>;
  struct Key {
    int s_state;
    ProfileSet profiles;
    bool operator<(const Key& o) const {
      return std::tie(s_state, profiles) < std::tie(o.s_state, o.profiles);
    }
  };

  Machine r;
  r.inputs = s.inputs;
  r.outputs = s.outputs;
  r.assoc_outputs = s.assoc_outputs;

  std::map<Key, int> index;
  std::deque<Key> todo;
  auto state_of = [&](const Key& key) {
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(r.states.size());
    index[key] = id;
    r.add_state(s.states[key.s_state].name + "#" + std::to_string(id),
                s.states[key.s_state].label);
    todo.push_back(key);
    return id;
  };

  Profile init(guarantees.size());
  for (size_t j = 0; j < guarantees.size(); ++j) init[j] = guarantees[j].initial;
  r.initial = state_of(Key{s.initial, {init}});

  const std::set<std::string> visible(s.inputs.begin(), s.inputs.end());
  while (!todo.empty()) {
    Key key = todo.front();
    todo.pop_front();
    const int id = index.at(key);
    const int t = key.s_state;
    for (uint32_t c = 0; c < s.cube_count(); ++c) {
      const int nt = s.states[t].succ[c];
      if (nt < 0) continue;
      // Position letter as far as this process sees it.
      Letter base = s.cube_to_letter(c);
      const Letter lab = s.label_letter(t);
      base.insert(lab.begin(), lab.end());

      // A profile survives iff the letter agrees with every guarantee's
      // current output on the part this process can observe; unobservable
      // guarantee outputs are completed to whatever the guarantee emits.
      ProfileSet next_profiles;
      for (const Profile& prof : key.profiles) {
        bool ok = true;
        Letter full = base;
        for (size_t j = 0; j < guarantees.size() && ok; ++j) {
          const Letter gout = guarantees[j].label_letter(prof[j]);
          for (const auto& v : guarantees[j].outputs) {
            const bool emitted = gout.count(v) > 0;
            if (visible.count(v)) {
              if ((base.count(v) > 0) != emitted) {
                ok = false;
                break;
              }
            } else if (emitted) {
              full.insert(v);
            }
          }
        }
        if (!ok) continue;
        for (uint32_t fc = 0; fc < (1u << free_list.size()); ++fc) {
          Letter ext = full;
          for (size_t b = 0; b < free_list.size(); ++b)
            if (fc & (1u << b)) ext.insert(free_list[b]);
          Profile np(guarantees.size());
          for (size_t j = 0; j < guarantees.size(); ++j) {
            const auto& g = guarantees[j];
            np[j] = g.states[prof[j]].succ[g.letter_to_cube(intersect(ext, g.inputs))];
          }
          next_profiles.insert(std::move(np));
        }
      }
      if (next_profiles.empty()) continue;  // every completion breaks a guarantee
      r.states[id].succ[c] = state_of(Key{nt, std::move(next_profiles)});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Extension
// ---------------------------------------------------------------------------

Machine extend_strategy(const Machine& s, const Machine& own) {
  if (s.mealy != own.mealy)
    throw InvalidInput("extend_strategy: strategy and guarantee disagree on semantics");
  if (!own.is_total()) throw InvalidInput("extend_strategy: guarantee must be total");

  Machine r;
  r.inputs = s.inputs;
  for (const auto& o : s.outputs)
    if (!std::count(s.assoc_outputs.begin(), s.assoc_outputs.end(), o))
      r.outputs.push_back(o);
  r.mealy = s.mealy;

  std::vector<uint32_t> cube_map(s.cube_count());
  for (uint32_t c = 0; c < s.cube_count(); ++c)
    cube_map[c] = own.letter_to_cube(s.cube_to_letter(c));

  const std::set<std::string> gset(own.outputs.begin(), own.outputs.end());
  auto check_agreement = [&](int t, int u) {
    if (!s.mealy) {
      Letter a, b;
      for (const auto& v : own.outputs) {
        if (s.label_letter(t).count(v)) a.insert(v);
        if (own.label_letter(u).count(v)) b.insert(v);
      }
      if (a != b)
        throw InvalidInput("extend_strategy: strategy disagrees with its guarantee at state " +
                           s.states[t].name);
    } else {
      for (uint32_t c = 0; c < s.cube_count(); ++c) {
        Letter a, b;
        for (const auto& v : own.outputs) {
          if (s.label_letter(t, c).count(v)) a.insert(v);
          if (own.label_letter(u, cube_map[c]).count(v)) b.insert(v);
        }
        if (a != b)
          throw InvalidInput("extend_strategy: strategy disagrees with its guarantee at state " +
                             s.states[t].name);
      }
    }
  };

  if (s.is_total() && s.assoc_outputs.empty()) {
    // Nothing to extend; still audit the precondition along the product.
    std::set<std::pair<int, int>> seen{{s.initial, own.initial}};
    std::deque<std::pair<int, int>> todo{{s.initial, own.initial}};
    while (!todo.empty()) {
      auto [t, u] = todo.front();
      todo.pop_front();
      check_agreement(t, u);
      for (uint32_t c = 0; c < s.cube_count(); ++c) {
        const int nt = s.states[t].succ[c];
        const int nu = own.states[u].succ[cube_map[c]];
        if (nt >= 0 && seen.insert({nt, nu}).second) todo.push_back({nt, nu});
      }
    }
    return s;
  }

  // States: (strategy state, tracked guarantee state) while the strategy is
  // alive, then guarantee states alone after the switch.
  std::map<std::pair<int, int>, int> live_index;
  std::map<int, int> fallback_index;
  std::deque<std::pair<int, int>> todo;  // second = -1 marks fallback states

  auto project_label = [&](const Letter& l) {
    Letter out;
    for (const auto& v : r.outputs)
      if (l.count(v)) out.insert(v);
    return out;
  };

  auto live_state = [&](int t, int u) {
    auto it = live_index.find({t, u});
    if (it != live_index.end()) return it->second;
    const int id = static_cast<int>(r.states.size());
    live_index[{t, u}] = id;
    auto& st = r.add_state(s.states[t].name + "+" + own.states[u].name,
                           r.output_mask(project_label(s.label_letter(t))));
    if (r.mealy)
      for (uint32_t c = 0; c < r.cube_count(); ++c)
        st.out[c] = r.output_mask(project_label(s.label_letter(t, c)));
    todo.push_back({t, u});
    return id;
  };
  auto fallback_state = [&](int u) {
    auto it = fallback_index.find(u);
    if (it != fallback_index.end()) return it->second;
    const int id = static_cast<int>(r.states.size());
    fallback_index[u] = id;
    auto& st = r.add_state("own:" + own.states[u].name,
                           r.output_mask(own.label_letter(u)));
    if (r.mealy)
      for (uint32_t c = 0; c < r.cube_count(); ++c)
        st.out[c] = r.output_mask(own.label_letter(u, cube_map[c]));
    todo.push_back({u, -1});
    return id;
  };

  r.initial = live_state(s.initial, own.initial);
  while (!todo.empty()) {
    auto [first, second] = todo.front();
    todo.pop_front();
    if (second >= 0) {
      const int t = first, u = second;
      check_agreement(t, u);
      const int id = live_index.at({t, u});
      for (uint32_t c = 0; c < s.cube_count(); ++c) {
        const int nt = s.states[t].succ[c];
        const int nu = own.states[u].succ[cube_map[c]];
        r.states[id].succ[c] = nt >= 0 ? live_state(nt, nu) : fallback_state(nu);
      }
    } else {
      const int u = first;
      const int id = fallback_index.at(u);
      for (uint32_t c = 0; c < r.cube_count(); ++c)
        r.states[id].succ[c] = fallback_state(own.states[u].succ[cube_map[c]]);
    }
  }
  return r;
}

}  // namespace certsynt
