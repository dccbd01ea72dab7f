#include <algorithm>
#include <cctype>
#include <chrono>
#include <deque>
#include <functional>

#include "tickforge/checkers.hpp"

namespace tickforge {

std::string property_name(Property p, bool bounded) {
  const char* base = "Z";
  switch (p) {
    case Property::Z: base = "Z"; break;
    case Property::S: base = "S"; break;
    case Property::V: base = "V"; break;
    case Property::L: base = "L"; break;
  }
  return bounded ? std::string("n-") + base : std::string(base);
}

Property parse_property(const std::string& s) {
  std::string t;
  for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "z") return Property::Z;
  if (t == "s") return Property::S;
  if (t == "v") return Property::V;
  if (t == "l") return Property::L;
  throw Error("unknown property '" + s + "' (expected z, s, v or l)");
}

namespace {

using NodeFilter = std::function<bool(std::size_t)>;

// Strongly connected components of the subgraph induced by `in`, iteratively.
// Returns a component id per node (npos outside the subgraph).
std::vector<std::size_t> components(const StateGraph& g, const std::vector<bool>& in) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  const std::size_t n = g.size();
  std::vector<std::size_t> index(n, none), low(n, 0), comp(n, none);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // node, next edge
  std::size_t counter = 0, next_comp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (!in[s] || index[s] != none) continue;
    call.emplace_back(s, 0);
    index[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = true;
    while (!call.empty()) {
      auto& [v, ei] = call.back();
      if (ei < g.out[v].size()) {
        const std::size_t w = g.out[v][ei++].to;
        if (!in[w]) continue;
        if (index[w] == none) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

struct ComponentInfo {
  std::vector<std::size_t> comp;
  std::vector<bool> cyclic;   // per component: contains a cycle
  std::vector<bool> ticking;  // per component: contains a Tick edge inside
};

ComponentInfo component_info(const StateGraph& g, const std::vector<bool>& in) {
  ComponentInfo ci;
  ci.comp = components(g, in);
  std::size_t count = 0;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (in[v]) count = std::max(count, ci.comp[v] + 1);
  ci.cyclic.assign(count, false);
  ci.ticking.assign(count, false);
  std::vector<std::size_t> members(count, 0);
  for (std::size_t v = 0; v < g.size(); ++v)
    if (in[v]) ++members[ci.comp[v]];
  for (std::size_t c = 0; c < count; ++c) ci.cyclic[c] = members[c] > 1;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!in[v]) continue;
    for (const auto& e : g.out[v]) {
      if (!in[e.to] || ci.comp[e.to] != ci.comp[v]) continue;
      ci.cyclic[ci.comp[v]] = true;
      if (e.rule == kTickRule) ci.ticking[ci.comp[v]] = true;
    }
  }
  return ci;
}

// Nodes of `in` that reach (inside `in`) some node marked in `target`.
std::vector<bool> backward(const StateGraph& g, const std::vector<bool>& in, const std::vector<bool>& target) {
  std::vector<std::vector<std::size_t>> rev(g.size());
  for (std::size_t v = 0; v < g.size(); ++v)
    if (in[v])
      for (const auto& e : g.out[v])
        if (in[e.to]) rev[e.to].push_back(v);
  std::vector<bool> seen(g.size(), false);
  std::deque<std::size_t> q;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (in[v] && target[v]) {
      seen[v] = true;
      q.push_back(v);
    }
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop_front();
    for (std::size_t u : rev[v])
      if (!seen[u]) {
        seen[u] = true;
        q.push_back(u);
      }
  }
  return seen;
}

// Shortest path inside `in` from `from` to the first node satisfying `goal`.
std::optional<std::vector<WitnessStep>> path_to(const StateGraph& g, std::size_t from, const std::vector<bool>& in,
                                                const NodeFilter& goal, std::size_t start_layer = 0) {
  if (!in[from]) return std::nullopt;
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(g.size(), none);
  std::vector<int> via(g.size(), kTickRule);
  std::vector<bool> seen(g.size(), false);
  std::deque<std::size_t> q{from};
  seen[from] = true;
  std::size_t hit = none;
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop_front();
    if (goal(v)) {
      hit = v;
      break;
    }
    for (const auto& e : g.out[v]) {
      if (!in[e.to] || seen[e.to]) continue;
      seen[e.to] = true;
      parent[e.to] = v;
      via[e.to] = e.rule;
      q.push_back(e.to);
    }
  }
  if (hit == none) return std::nullopt;
  std::vector<WitnessStep> steps;
  for (std::size_t v = hit; v != from; v = parent[v]) steps.push_back({parent[v], v, via[v], 0});
  std::reverse(steps.begin(), steps.end());
  std::size_t layer = start_layer;
  for (auto& s : steps) {
    s.layer = layer;
    if (s.rule == kTickRule) ++layer;
  }
  return steps;
}

std::size_t layer_after(const std::vector<WitnessStep>& steps, std::size_t start) {
  std::size_t l = start;
  for (const auto& s : steps) l += s.rule == kTickRule;
  return l;
}

struct Unbounded {
  std::vector<bool> ok;        // not critical
  ComponentInfo ci;            // of the compliant subgraph
  std::vector<bool> good;      // reaches a ticking component compliantly
  std::vector<bool> infinite;  // reaches a cyclic component compliantly
};

Unbounded analyze_unbounded(const StateGraph& g) {
  Unbounded u;
  u.ok.resize(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) u.ok[v] = !g.critical[v];
  u.ci = component_info(g, u.ok);
  std::vector<bool> ticking(g.size(), false), cyclic(g.size(), false);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!u.ok[v]) continue;
    ticking[v] = u.ci.ticking[u.ci.comp[v]];
    cyclic[v] = u.ci.cyclic[u.ci.comp[v]];
  }
  u.good = backward(g, u.ok, ticking);
  u.infinite = backward(g, u.ok, cyclic);
  return u;
}

// Compliant lasso from the root: stem to a Tick edge inside a ticking
// component, then around that component back to the edge's source.
void lasso(const StateGraph& g, const Unbounded& u, Verdict& v) {
  auto ticks_inside = [&](std::size_t n) {
    if (!u.ok[n] || !u.ci.ticking[u.ci.comp[n]]) return false;
    for (const auto& e : g.out[n])
      if (e.rule == kTickRule && u.ok[e.to] && u.ci.comp[e.to] == u.ci.comp[n]) return true;
    return false;
  };
  auto stem = path_to(g, g.root, u.ok, ticks_inside);
  if (!stem) throw Error("internal error: no lasso although the property holds");
  const std::size_t a = stem->empty() ? g.root : stem->back().to;
  std::size_t b = a;
  for (const auto& e : g.out[a])
    if (e.rule == kTickRule && u.ok[e.to] && u.ci.comp[e.to] == u.ci.comp[a]) b = e.to;
  const std::size_t layer = layer_after(*stem, 0);
  std::vector<WitnessStep> cycle{{a, b, kTickRule, layer}};
  if (b != a) {
    std::vector<bool> inside(g.size(), false);
    for (std::size_t n = 0; n < g.size(); ++n) inside[n] = u.ok[n] && u.ci.comp[n] == u.ci.comp[a];
    auto back = path_to(g, b, inside, [a](std::size_t n) { return n == a; }, layer + 1);
    if (!back) throw Error("internal error: component is not strongly connected");
    cycle.insert(cycle.end(), back->begin(), back->end());
  }
  v.stem = std::move(*stem);
  v.cycle = std::move(cycle);
}

void fail(Verdict& v, std::string kind, std::vector<WitnessStep> path = {}) {
  v.holds = false;
  v.counterexample_kind = std::move(kind);
  v.counterexample = std::move(path);
}

void check_unbounded(const StateGraph& g, Property p, Verdict& v) {
  const Unbounded u = analyze_unbounded(g);
  if (g.critical[g.root]) return fail(v, "initial-critical");
  if (!u.good[g.root]) return fail(v, "no-compliant-infinite-time-trace");

  if (p == Property::S) {
    std::vector<bool> all(g.size(), true);
    const ComponentInfo full = component_info(g, all);
    std::vector<bool> ticking(g.size(), false);
    for (std::size_t n = 0; n < g.size(); ++n) ticking[n] = full.ticking[full.comp[n]];
    const std::vector<bool> endless = backward(g, all, ticking);
    auto bad = path_to(g, g.root, all, [&](std::size_t n) { return g.critical[n] && endless[n]; });
    if (bad) return fail(v, "critical-on-infinite-time-trace", std::move(*bad));
  } else if (p == Property::V) {
    auto bad = path_to(g, g.root, u.ok, [&](std::size_t n) { return !u.infinite[n]; });
    if (bad) return fail(v, "point-of-no-return", std::move(*bad));
  } else if (p == Property::L) {
    auto bad = path_to(g, g.root, u.ok, [&](std::size_t n) { return !u.good[n]; });
    if (bad) return fail(v, "not-extendable", std::move(*bad));
  }
  v.holds = true;
  lasso(g, u, v);
}

// Layered exploration: state (node, ticks so far), ticks capped at n.
class Layered {
 public:
  Layered(const StateGraph& g, std::uint64_t n, std::size_t budget) : g_(g), n_(n) {
    const double pairs = static_cast<double>(g.size()) * (static_cast<double>(n) + 1);
    if (pairs > static_cast<double>(budget))
      throw ResourceExhausted("bounded exploration needs " + std::to_string(static_cast<unsigned long long>(pairs)) +
                              " (state, tick) pairs, over the node budget of " + std::to_string(budget));
    width_ = static_cast<std::size_t>(n) + 1;
  }

  std::size_t id(std::size_t node, std::uint64_t layer) const { return node * width_ + static_cast<std::size_t>(layer); }
  std::size_t node(std::size_t id) const { return id / width_; }
  std::uint64_t layer(std::size_t id) const { return id % width_; }
  std::size_t count() const { return g_.size() * width_; }

  template <typename F>
  void successors(std::size_t s, F&& f) const {
    const std::size_t v = node(s);
    const std::uint64_t j = layer(s);
    for (const auto& e : g_.out[v]) {
      if (e.rule == kTickRule) {
        if (j < n_) f(id(e.to, j + 1), e.rule);
      } else {
        f(id(e.to, j), e.rule);
      }
    }
  }

  // Forward BFS from the root over states allowed by `in`; records parents.
  std::vector<bool> forward(const std::function<bool(std::size_t)>& in) {
    parent_.assign(count(), static_cast<std::size_t>(-1));
    via_.assign(count(), kTickRule);
    std::vector<bool> seen(count(), false);
    const std::size_t start = id(g_.root, 0);
    if (!in(start)) return seen;
    std::deque<std::size_t> q{start};
    seen[start] = true;
    while (!q.empty()) {
      const std::size_t s = q.front();
      q.pop_front();
      successors(s, [&](std::size_t t, int rule) {
        if (seen[t] || !in(t)) return;
        seen[t] = true;
        parent_[t] = s;
        via_[t] = rule;
        q.push_back(t);
      });
    }
    return seen;
  }

  // States allowed by `in` that reach a last-layer state inside `in`.
  std::vector<bool> reaches_last(const std::function<bool(std::size_t)>& in) const {
    std::vector<std::vector<std::size_t>> rev(count());
    for (std::size_t s = 0; s < count(); ++s) {
      if (!in(s)) continue;
      successors(s, [&](std::size_t t, int) {
        if (in(t)) rev[t].push_back(s);
      });
    }
    std::vector<bool> seen(count(), false);
    std::deque<std::size_t> q;
    for (std::size_t v = 0; v < g_.size(); ++v) {
      const std::size_t s = id(v, n_);
      if (in(s)) {
        seen[s] = true;
        q.push_back(s);
      }
    }
    while (!q.empty()) {
      const std::size_t s = q.front();
      q.pop_front();
      for (std::size_t u : rev[s])
        if (!seen[u]) {
          seen[u] = true;
          q.push_back(u);
        }
    }
    return seen;
  }

  // Path recorded by the last forward() to `target`.
  std::vector<WitnessStep> path(std::size_t target) const {
    std::vector<WitnessStep> steps;
    const std::size_t start = id(g_.root, 0);
    for (std::size_t s = target; s != start; s = parent_[s])
      steps.push_back({node(parent_[s]), node(s), via_[s], static_cast<std::size_t>(layer(parent_[s]))});
    std::reverse(steps.begin(), steps.end());
    return steps;
  }

 private:
  const StateGraph& g_;
  std::uint64_t n_;
  std::size_t width_ = 1;
  std::vector<std::size_t> parent_;
  std::vector<int> via_;
};

void check_bounded(const StateGraph& g, Property p, std::uint64_t n, std::size_t budget, Verdict& v) {
  if (p == Property::V) throw Error("there is no bounded variant of V; use z, s or l with --ticks");
  if (g.critical[g.root]) return fail(v, "initial-critical");
  Layered lg(g, n, budget);
  auto compliant = [&](std::size_t s) { return !g.critical[lg.node(s)]; };
  auto anything = [](std::size_t) { return true; };

  const auto reach_ok = lg.forward(compliant);
  std::optional<std::size_t> last;
  for (std::size_t s = 0; s < lg.count() && !last; ++s)
    if (reach_ok[s] && lg.layer(s) == n) last = s;
  if (!last) return fail(v, "no-compliant-trace-to-bound");
  v.stem = lg.path(*last);

  if (p == Property::S) {
    const auto live = lg.reaches_last(anything);
    const auto reach_all = lg.forward(anything);
    for (std::size_t s = 0; s < lg.count(); ++s)
      if (reach_all[s] && g.critical[lg.node(s)] && live[s]) {
        v.stem.clear();
        return fail(v, "critical-within-bound", lg.path(s));
      }
  } else if (p == Property::L) {
    const auto live = lg.reaches_last(compliant);
    for (std::size_t s = 0; s < lg.count(); ++s)
      if (reach_ok[s] && !live[s]) {
        v.stem.clear();
        return fail(v, "cannot-reach-bound", lg.path(s));
      }
  }
  v.holds = true;
}

}  // namespace

bool is_point_of_no_return(const StateGraph& g, std::size_t node) {
  const Unbounded u = analyze_unbounded(g);
  return u.ok.at(node) && !u.infinite[node];
}

Verdict check_on(const SpecModel& spec, std::shared_ptr<const StateGraph> g, Property p,
                 std::optional<std::uint64_t> ticks, std::size_t budget) {
  Verdict v;
  v.property = p;
  v.ticks = ticks;
  const SpecStats stats = analyze(spec);
  v.progressing = stats.progressing;
  v.lsigma_bound = count_bound(stats).str();
  v.nodes = g->size();
  v.edges = g->edge_count();
  if (ticks) check_bounded(*g, p, *ticks, budget, v);
  else check_unbounded(*g, p, v);
  v.graph = std::move(g);
  return v;
}

Verdict check(const SpecModel& spec, Property p, const CheckOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  auto g = build_graph(spec, opt.graph);
  Verdict v = check_on(spec, g, p, opt.ticks, opt.graph.node_budget);
  v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

}  // namespace tickforge
