#include "tickforge/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

namespace tickforge {

namespace {

bool has_nonce(const Term& t) {
  if (t.kind == TermKind::nonce) return true;
  return std::any_of(t.args.begin(), t.args.end(), has_nonce);
}

void require_nonce_free(const SpecModel& spec) {
  for (const auto& r : spec.rules)
    if (!r.fresh.empty()) throw Error("the oracle does not handle fresh values (rule " + r.name + ")");
  for (const auto& f : spec.initial.facts())
    for (const auto& a : f.fact.args)
      if (has_nonce(a)) throw Error("the oracle does not handle nonces in the initial configuration");
}

std::uint64_t magnitude(std::int64_t v) { return v < 0 ? static_cast<std::uint64_t>(-v) : static_cast<std::uint64_t>(v); }

// Largest number that can matter when comparing timestamps.
std::uint64_t oracle_dmax(const SpecModel& spec) {
  std::uint64_t d = spec.initial.global_time();
  for (const auto& f : spec.initial.facts()) d = std::max(d, f.time);
  for (const auto& r : spec.rules) {
    for (const auto& c : r.created) d = std::max(d, c.delay);
    for (const auto& c : r.guard) d = std::max(d, magnitude(c.offset));
  }
  for (const auto& p : spec.critical.pairs)
    for (const auto& c : p.constraints) d = std::max(d, magnitude(c.offset));
  return d;
}

// All results of one instantaneous step from `c`, in no particular order.
std::vector<std::pair<int, Configuration>> instant_successors(const Configuration& c, const SpecModel& spec) {
  std::vector<std::pair<int, Configuration>> out;
  const auto& facts = c.facts();
  for (std::size_t ri = 0; ri < spec.rules.size(); ++ri) {
    const Rule& r = spec.rules[ri];
    std::vector<TimedPattern> pre{{Fact{std::string(kTimePredicate), {}}, r.time_var}};
    for (const auto& p : r.preserved) pre.push_back(p);
    const std::size_t first_consumed = pre.size();
    for (const auto& p : r.consumed) pre.push_back(p);
    for_each_match(pre, c, {}, [&](const Substitution& s, const std::vector<std::size_t>& used) {
      if (!constraints_hold(r.guard, s)) return true;
      std::multiset<std::size_t> drop(used.begin() + static_cast<std::ptrdiff_t>(first_consumed), used.end());
      std::vector<TimedFact> next;
      for (std::size_t i = 0; i < facts.size(); ++i)
        if (!drop.count(i)) next.push_back(facts[i]);
      for (const auto& cf : r.created) {
        Fact f = instantiate(cf.fact, s);
        if (!spec.signature.admits(f)) return true;
        next.push_back({f, c.global_time() + cf.delay});
      }
      out.emplace_back(static_cast<int>(ri), Configuration(c.global_time(), next));
      return true;
    });
  }
  return out;
}

// Same configuration up to a time shift, with every gap longer than Dmax
// shortened to Dmax + 1, earliest timestamp at 0.
Configuration normal_form(const Configuration& c, std::uint64_t dmax) {
  std::vector<TimedFact> all = c.facts();
  all.push_back({Fact{std::string(kTimePredicate), {}}, c.global_time()});
  std::vector<Timestamp> stamps;
  for (const auto& f : all) stamps.push_back(f.time);
  std::sort(stamps.begin(), stamps.end());
  stamps.erase(std::unique(stamps.begin(), stamps.end()), stamps.end());
  std::map<Timestamp, Timestamp> moved;
  Timestamp t = 0;
  for (std::size_t i = 0; i < stamps.size(); ++i) {
    if (i) t += std::min<Timestamp>(stamps[i] - stamps[i - 1], dmax + 1);
    moved[stamps[i]] = t;
  }
  std::vector<TimedFact> facts;
  for (const auto& f : c.facts()) facts.push_back({f.fact, moved[f.time]});
  return Configuration(moved[c.global_time()], facts);
}

struct Explorer {
  const SpecModel& spec;
  std::size_t budget;
  std::map<std::string, std::size_t> index;
  OracleGraph g;

  std::pair<std::size_t, bool> add(const Configuration& c) {
    auto key = render(c);
    auto it = index.find(key);
    if (it != index.end()) return {it->second, false};
    if (g.states.size() >= budget) throw ResourceExhausted("oracle state budget exceeded");
    index.emplace(key, g.states.size());
    g.states.push_back(c);
    g.edges.emplace_back();
    return {g.states.size() - 1, true};
  }

  void link(std::size_t from, std::size_t to, int rule) {
    auto& e = g.edges[from];
    if (std::find(e.begin(), e.end(), std::make_pair(to, rule)) == e.end()) e.emplace_back(to, rule);
  }
};

// Explores from the initial configuration; `keep` maps each successor to the
// configuration stored for it; `may_tick` decides whether a Tick is explored.
OracleGraph explore(const SpecModel& spec, std::size_t budget, const std::function<Configuration(const Configuration&)>& keep,
                    const std::function<bool(const Configuration&)>& may_tick) {
  Explorer ex{spec, budget, {}, {}};
  ex.g.root = ex.add(keep(spec.initial)).first;
  std::vector<std::size_t> todo{ex.g.root};
  while (!todo.empty()) {
    const std::size_t v = todo.back();
    todo.pop_back();
    const Configuration cur = ex.g.states[v];
    auto succ = instant_successors(cur, spec);
    if (succ.empty()) {
      if (!may_tick(cur)) continue;
      succ.emplace_back(kTickRule, Configuration(cur.global_time() + 1, cur.facts()));
    }
    for (const auto& [rule, next] : succ) {
      auto [id, fresh] = ex.add(keep(next));
      ex.link(v, id, rule);
      if (fresh) todo.push_back(id);
    }
  }
  return ex.g;
}

using Nodes = std::vector<bool>;

std::vector<std::vector<std::size_t>> reversed(const OracleGraph& g) {
  std::vector<std::vector<std::size_t>> rev(g.states.size());
  for (std::size_t v = 0; v < g.states.size(); ++v)
    for (const auto& [w, rule] : g.edges[v]) rev[w].push_back(v);
  return rev;
}

// Nodes from which some node in `goal` can be reached through `allowed` nodes
// (both ends included).
Nodes can_reach(const OracleGraph& g, const Nodes& allowed, const Nodes& goal) {
  const auto rev = reversed(g);
  Nodes r(g.states.size(), false);
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < r.size(); ++v)
    if (allowed[v] && goal[v]) {
      r[v] = true;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    const std::size_t w = stack.back();
    stack.pop_back();
    for (std::size_t v : rev[w])
      if (allowed[v] && !r[v]) {
        r[v] = true;
        stack.push_back(v);
      }
  }
  return r;
}

Nodes reachable_from_root(const OracleGraph& g, const Nodes& allowed) {
  Nodes seen(g.states.size(), false);
  if (!allowed[g.root]) return seen;
  std::vector<std::size_t> stack{g.root};
  seen[g.root] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (const auto& [w, rule] : g.edges[v])
      if (allowed[w] && !seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return seen;
}

// Strongly connected components of the `allowed` subgraph (Kosaraju).
std::vector<std::size_t> components(const OracleGraph& g, const Nodes& allowed) {
  const std::size_t n = g.states.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> order;
  Nodes done(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (!allowed[s] || done[s]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    done[s] = true;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < g.edges[v].size()) {
        const std::size_t w = g.edges[v][i++].first;
        if (allowed[w] && !done[w]) {
          done[w] = true;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  const auto rev = reversed(g);
  std::vector<std::size_t> comp(n, none);
  std::size_t next = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] != none) continue;
    std::vector<std::size_t> stack{*it};
    comp[*it] = next;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u : rev[v])
        if (allowed[u] && comp[u] == none) {
          comp[u] = next;
          stack.push_back(u);
        }
    }
    ++next;
  }
  return comp;
}

// Sources of edges lying on a cycle inside `allowed`; with `ticking`, only Tick edges count.
Nodes on_cycle(const OracleGraph& g, const Nodes& allowed, bool ticking) {
  const auto comp = components(g, allowed);
  Nodes out(g.states.size(), false);
  for (std::size_t v = 0; v < out.size(); ++v) {
    if (!allowed[v]) continue;
    for (const auto& [w, rule] : g.edges[v])
      if (allowed[w] && comp[w] == comp[v] && (!ticking || rule == kTickRule)) out[v] = true;
  }
  return out;
}

bool evaluate_unbounded(const OracleGraph& g, const SpecModel& spec, char p) {
  const std::size_t n = g.states.size();
  Nodes ok(n), all(n, true);
  for (std::size_t v = 0; v < n; ++v) ok[v] = !is_critical(g.states[v], spec.critical);
  if (!ok[g.root]) return false;
  const Nodes good = can_reach(g, ok, on_cycle(g, ok, true));
  if (!good[g.root]) return false;
  const Nodes reach = reachable_from_root(g, ok);
  switch (p) {
    case 'z': return true;
    case 's': {
      const Nodes endless = can_reach(g, all, on_cycle(g, all, true));
      const Nodes any = reachable_from_root(g, all);
      for (std::size_t v = 0; v < n; ++v)
        if (any[v] && !ok[v] && endless[v]) return false;
      return true;
    }
    case 'v': {
      const Nodes infinite = can_reach(g, ok, on_cycle(g, ok, false));
      for (std::size_t v = 0; v < n; ++v)
        if (reach[v] && !infinite[v]) return false;
      return true;
    }
    case 'l':
      for (std::size_t v = 0; v < n; ++v)
        if (reach[v] && !good[v]) return false;
      return true;
  }
  throw Error("unknown property");
}

bool evaluate_bounded(const OracleGraph& g, const SpecModel& spec, char p, std::uint64_t ticks) {
  const std::size_t n = g.states.size();
  const Timestamp start = spec.initial.global_time();
  Nodes ok(n), all(n, true), last(n);
  for (std::size_t v = 0; v < n; ++v) {
    ok[v] = !is_critical(g.states[v], spec.critical);
    last[v] = g.states[v].global_time() - start == ticks;
  }
  if (!ok[g.root]) return false;
  const Nodes to_last_ok = can_reach(g, ok, last);
  if (!to_last_ok[g.root]) return false;
  switch (p) {
    case 'z': return true;
    case 's': {
      const Nodes to_last = can_reach(g, all, last);
      const Nodes any = reachable_from_root(g, all);
      for (std::size_t v = 0; v < n; ++v)
        if (any[v] && !ok[v] && to_last[v]) return false;
      return true;
    }
    case 'l': {
      const Nodes reach = reachable_from_root(g, ok);
      for (std::size_t v = 0; v < n; ++v)
        if (reach[v] && !to_last_ok[v]) return false;
      return true;
    }
  }
  throw Error("the oracle has no bounded variant of " + std::string(1, p));
}

char property_letter(const std::string& s) {
  if (s.size() == 1) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    if (c == 'z' || c == 's' || c == 'v' || c == 'l') return c;
  }
  throw Error("unknown property '" + s + "'");
}

}  // namespace

OracleGraph oracle_graph(const SpecModel& spec, std::uint64_t tick_horizon, std::size_t budget) {
  require_nonce_free(spec);
  const Timestamp start = spec.initial.global_time();
  return explore(
      spec, budget, [](const Configuration& c) { return c; },
      [&](const Configuration& c) { return c.global_time() - start < tick_horizon; });
}

std::size_t oracle_quotient_size(const SpecModel& spec, std::size_t budget) {
  require_nonce_free(spec);
  const std::uint64_t dmax = oracle_dmax(spec);
  return explore(
             spec, budget, [dmax](const Configuration& c) { return normal_form(c, dmax); },
             [](const Configuration&) { return true; })
      .states.size();
}

bool oracle_check(const SpecModel& spec, const std::string& property, std::optional<std::uint64_t> ticks,
                  std::size_t budget) {
  require_nonce_free(spec);
  const char p = property_letter(property);
  if (ticks) return evaluate_bounded(oracle_graph(spec, *ticks, budget), spec, p, *ticks);
  const std::uint64_t dmax = oracle_dmax(spec);
  const OracleGraph g = explore(
      spec, budget, [dmax](const Configuration& c) { return normal_form(c, dmax); },
      [](const Configuration&) { return true; });
  return evaluate_unbounded(g, spec, p);
}

}  // namespace tickforge
