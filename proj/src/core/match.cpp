#include "tickforge/core.hpp"

#include <algorithm>

namespace tickforge {

namespace {

// Bindings made while matching one fact, so they can be undone on backtrack.
struct Trail {
  std::vector<std::string> terms;
  std::vector<std::string> times;
};

void undo(Substitution& s, Trail& trail, std::size_t terms_mark, std::size_t times_mark) {
  while (trail.terms.size() > terms_mark) {
    s.terms.erase(trail.terms.back());
    trail.terms.pop_back();
  }
  while (trail.times.size() > times_mark) {
    s.times.erase(trail.times.back());
    trail.times.pop_back();
  }
}

bool bind_term(const std::string& var, Term value, Substitution& s, Trail& trail) {
  auto it = s.terms.find(var);
  if (it != s.terms.end()) return it->second == value;
  s.terms.emplace(var, std::move(value));
  trail.terms.push_back(var);
  return true;
}

bool bind_time(const std::string& var, Timestamp value, Substitution& s, Trail& trail) {
  auto it = s.times.find(var);
  if (it != s.times.end()) return it->second == value;
  s.times.emplace(var, value);
  trail.times.push_back(var);
  return true;
}

bool match_term(const Term& pat, const Term& ground, Substitution& s, Trail& trail) {
  switch (pat.kind) {
    case TermKind::variable:
      if (pat.value == 0) return bind_term(pat.name, ground, s, trail);
      if (ground.kind != TermKind::numeral || ground.value < pat.value) return false;
      return bind_term(pat.name, Term::numeral(ground.value - pat.value), s, trail);
    case TermKind::compound:
      if (ground.kind != TermKind::compound || ground.name != pat.name || ground.args.size() != pat.args.size())
        return false;
      for (std::size_t i = 0; i < pat.args.size(); ++i) {
        if (!match_term(pat.args[i], ground.args[i], s, trail)) return false;
      }
      return true;
    default:
      return pat == ground;
  }
}

bool match_fact(const TimedPattern& pat, const TimedFact& ground, Substitution& s, Trail& trail) {
  if (pat.fact.predicate != ground.fact.predicate || pat.fact.args.size() != ground.fact.args.size()) return false;
  for (std::size_t i = 0; i < pat.fact.args.size(); ++i) {
    if (!match_term(pat.fact.args[i], ground.fact.args[i], s, trail)) return false;
  }
  return bind_time(pat.time_var, ground.time, s, trail);
}

class Matcher {
 public:
  Matcher(const std::vector<TimedPattern>& patterns, const Configuration& config, const MatchCallback& cb)
      : patterns_(patterns), config_(config), cb_(cb), used_(config.facts().size(), false) {}

  void run(Substitution sigma) {
    sigma_ = std::move(sigma);
    chosen_.assign(patterns_.size(), npos);
    search(0);
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool search(std::size_t level) {
    if (level == patterns_.size()) return cb_(sigma_, chosen_);
    const TimedPattern& pat = patterns_[level];
    const std::size_t terms_mark = trail_.terms.size();
    const std::size_t times_mark = trail_.times.size();

    if (pat.fact.predicate == kTimePredicate) {
      bool go_on = true;
      if (pat.fact.args.empty() && bind_time(pat.time_var, config_.global_time(), sigma_, trail_)) {
        chosen_[level] = npos;
        go_on = search(level + 1);
      }
      undo(sigma_, trail_, terms_mark, times_mark);
      return go_on;
    }

    const auto& facts = config_.facts();
    auto lo = std::lower_bound(facts.begin(), facts.end(), pat.fact.predicate,
                               [](const TimedFact& f, const std::string& p) { return f.fact.predicate < p; });
    const TimedFact* last_tried = nullptr;
    for (auto it = lo; it != facts.end() && it->fact.predicate == pat.fact.predicate; ++it) {
      const auto i = static_cast<std::size_t>(it - facts.begin());
      if (used_[i]) continue;
      // identical occurrences give identical substitutions; try the value once
      if (last_tried != nullptr && *last_tried == *it) continue;
      last_tried = &*it;
      if (match_fact(pat, *it, sigma_, trail_)) {
        used_[i] = true;
        chosen_[level] = i;
        const bool go_on = search(level + 1);
        used_[i] = false;
        if (!go_on) {
          undo(sigma_, trail_, terms_mark, times_mark);
          return false;
        }
      }
      undo(sigma_, trail_, terms_mark, times_mark);
    }
    return true;
  }

  const std::vector<TimedPattern>& patterns_;
  const Configuration& config_;
  const MatchCallback& cb_;
  std::vector<bool> used_;
  std::vector<std::size_t> chosen_;
  Substitution sigma_;
  Trail trail_;
};

Term instantiate_term(const Term& t, const Substitution& s) {
  switch (t.kind) {
    case TermKind::variable: {
      const Term* bound = nullptr;
      if (auto it = s.terms.find(t.name); it != s.terms.end()) bound = &it->second;
      else if (auto jt = s.fresh.find(t.name); jt != s.fresh.end()) bound = &jt->second;
      if (bound == nullptr) throw Error("unbound variable " + t.name);
      if (t.value == 0) return *bound;
      if (bound->kind != TermKind::numeral) throw Error("variable " + t.name + " is not numeric");
      return Term::numeral(checked_add(bound->value, t.value));
    }
    case TermKind::compound: {
      Term out = t;
      for (auto& a : out.args) a = instantiate_term(a, s);
      return out;
    }
    default:
      return t;
  }
}

}  // namespace

Fact instantiate(const Fact& pattern, const Substitution& sigma) {
  Fact out{pattern.predicate, {}};
  out.args.reserve(pattern.args.size());
  for (const auto& a : pattern.args) out.args.push_back(instantiate_term(a, sigma));
  return out;
}

void for_each_match(const std::vector<TimedPattern>& patterns, const Configuration& config,
                    const Substitution& seed, const MatchCallback& cb) {
  Matcher m(patterns, config, cb);
  m.run(seed);
}

std::vector<Substitution> match(const std::vector<TimedPattern>& patterns, const Configuration& config) {
  std::vector<Substitution> out;
  for_each_match(patterns, config, {}, [&](const Substitution& s, const std::vector<std::size_t>&) {
    out.push_back(s);
    return true;
  });
  return out;
}

bool constraints_hold(const std::vector<Constraint>& cs, const Substitution& sigma) {
  for (const auto& c : cs) {
    auto l = sigma.times.find(c.lhs);
    auto r = sigma.times.find(c.rhs);
    if (l == sigma.times.end() || r == sigma.times.end())
      throw Error("constraint " + render(c) + " mentions an unbound time variable");
    if (!c.holds(l->second, r->second)) return false;
  }
  return true;
}

bool is_critical(const Configuration& config, const CriticalSpec& cs) {
  for (const auto& pair : cs.pairs) {
    bool hit = false;
    for_each_match(pair.patterns, config, {}, [&](const Substitution& s, const std::vector<std::size_t>&) {
      hit = constraints_hold(pair.constraints, s);
      return !hit;
    });
    if (hit) return true;
  }
  return false;
}

}  // namespace tickforge
