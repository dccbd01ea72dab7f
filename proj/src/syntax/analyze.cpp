#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "tickforge/syntax.hpp"

namespace tickforge {

bool entails_geq(const std::vector<Constraint>& guard, const std::string& lhs, const std::string& rhs) {
  if (lhs == rhs) return true;
  // Difference constraints v - u <= w as edges u -> v of weight w; the guard
  // entails lhs >= rhs iff adding lhs - rhs <= -1 makes the system infeasible.
  std::map<std::string, std::size_t> index;
  auto id = [&](const std::string& v) { return index.emplace(v, index.size()).first->second; };
  struct Edge {
    std::size_t u, v;
    std::int64_t w;
  };
  std::vector<Edge> edges;
  auto geq = [&](const std::string& x, const std::string& y, std::int64_t c) {  // x - y >= c
    edges.push_back({id(x), id(y), -c});
  };
  for (const auto& c : guard) {
    switch (c.rel) {
      case Relation::greater:
        geq(c.lhs, c.rhs, c.offset + 1);
        break;
      case Relation::greater_equal:
        geq(c.lhs, c.rhs, c.offset);
        break;
      case Relation::equal:
        geq(c.lhs, c.rhs, c.offset);
        geq(c.rhs, c.lhs, -c.offset);
        break;
    }
  }
  geq(rhs, lhs, 1);  // negated goal: rhs - lhs >= 1

  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  const std::size_t n = index.size();
  std::vector<std::int64_t> dist(n * n, inf);
  for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = 0;
  for (const auto& e : edges) dist[e.u * n + e.v] = std::min(dist[e.u * n + e.v], e.w);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (dist[i * n + k] < inf && dist[k * n + j] < inf)
          dist[i * n + j] = std::min(dist[i * n + j], dist[i * n + k] + dist[k * n + j]);
  for (std::size_t i = 0; i < n; ++i)
    if (dist[i * n + i] < 0) return true;
  return false;
}

namespace {

std::uint64_t magnitude(std::int64_t v) { return v < 0 ? static_cast<std::uint64_t>(-v) : static_cast<std::uint64_t>(v); }

std::size_t max_sort_size(const std::string& sort, const Signature& sig, int depth) {
  const Sort* s = sig.find_sort(sort);
  if (s == nullptr) return 1;  // nonce
  if (s->numeric) return static_cast<std::size_t>(s->max) + 1;
  std::size_t best = s->members.empty() ? 0 : 1;
  if (depth > 8) return best;
  for (const auto& f : sig.functions) {
    if (f.result_sort != sort) continue;
    std::size_t n = 1;
    for (const auto& a : f.arg_sorts) n += max_sort_size(a, sig, depth + 1);
    best = std::max(best, n);
  }
  return best;
}

// Largest size a pattern term can take once its variables are instantiated.
std::size_t max_term_size(const Term& t, const std::string& sort, const Signature& sig) {
  switch (t.kind) {
    case TermKind::variable:
      return max_sort_size(sort, sig, 0);
    case TermKind::compound: {
      const FunctionDecl* f = sig.find_function(t.name);
      std::size_t n = 1;
      for (std::size_t i = 0; i < t.args.size(); ++i)
        n += max_term_size(t.args[i], f ? f->arg_sorts[i] : sort, sig);
      return n;
    }
    default:
      return term_size(t);
  }
}

std::size_t max_fact_size(const Fact& f, const Signature& sig) {
  if (f.predicate == kTimePredicate) return 1;
  const PredicateDecl* p = sig.find_predicate(f.predicate);
  std::size_t n = 1;
  for (std::size_t i = 0; i < f.args.size(); ++i)
    n += max_term_size(f.args[i], p ? p->arg_sorts[i] : std::string(), sig);
  return n;
}

}  // namespace

SpecStats analyze(const SpecModel& spec) {
  SpecStats st;
  st.m = spec.initial.size();
  st.rules = spec.rules.size();
  st.declared_rules = spec.declared_rules ? spec.declared_rules : spec.rules.size();
  st.J = spec.signature.predicates.size() + 1;  // plus Time

  std::set<std::string> constants;
  bool numeric = false;
  for (const auto& s : spec.signature.sorts) {
    constants.insert(s.members.begin(), s.members.end());
    numeric = numeric || s.numeric;
  }
  st.E = constants.size() + spec.signature.functions.size() + (numeric ? 2 : 0);  // z and s

  const Signature& sig = spec.signature;
  st.k = 1;
  for (const auto& f : spec.initial.facts()) {
    st.k = std::max(st.k, fact_size(f.fact));
    st.dmax = std::max(st.dmax, f.time);
  }
  st.dmax = std::max(st.dmax, spec.initial.global_time());

  st.balanced = true;
  st.progressing = true;
  for (const auto& r : spec.rules) {
    for (const auto* list : {&r.preserved, &r.consumed})
      for (const auto& p : *list) st.k = std::max(st.k, max_fact_size(p.fact, sig));
    bool future = false;
    for (const auto& c : r.created) {
      st.k = std::max(st.k, max_fact_size(c.fact, sig));
      st.dmax = std::max(st.dmax, c.delay);
      future = future || c.delay >= 1;
    }
    for (const auto& c : r.guard) st.dmax = std::max(st.dmax, magnitude(c.offset));
    if (r.consumed.size() != r.created.size()) st.balanced = false;
    if (!future) st.progressing = false;
    for (const auto& p : r.consumed)
      if (!entails_geq(r.guard, r.time_var, p.time_var)) st.progressing = false;
  }
  for (const auto& pair : spec.critical.pairs) {
    for (const auto& p : pair.patterns) st.k = std::max(st.k, max_fact_size(p.fact, sig));
    for (const auto& c : pair.constraints) st.dmax = std::max(st.dmax, magnitude(c.offset));
  }
  st.progressing = st.progressing && st.balanced;
  return st;
}

}  // namespace tickforge
