#include "tickforge/engine.hpp"

#include <algorithm>
#include <memory>
#include <random>

namespace tickforge {

namespace {

std::uint64_t max_nonce(const Term& t) {
  std::uint64_t m = t.kind == TermKind::nonce ? t.value + 1 : 0;
  for (const auto& a : t.args) m = std::max(m, max_nonce(a));
  return m;
}

// Fills fresh variables that sigma leaves open.
Substitution with_fresh(const Rule& rule, const Substitution& sigma, NonceSource& nonces) {
  Substitution out = sigma;
  for (const auto& f : rule.fresh)
    if (!out.fresh.count(f)) out.fresh.emplace(f, Term::nonce(nonces.next()));
  return out;
}

}  // namespace

std::uint64_t next_free_nonce(const Configuration& config) {
  std::uint64_t m = 0;
  for (const auto& f : config.facts())
    for (const auto& a : f.fact.args) m = std::max(m, max_nonce(a));
  return m;
}

Configuration tick(const Configuration& config) {
  return Configuration(checked_add(config.global_time(), 1), config.facts());
}

Configuration apply_rule(const Configuration& config, const Rule& rule, const Substitution& sigma,
                         NonceSource& nonces, const Signature* sig) {
  if (rule.kind == RuleKind::tick) return tick(config);

  auto it = sigma.times.find(rule.time_var);
  if (it == sigma.times.end() || it->second != config.global_time())
    throw NotApplicable(rule.name + ": global time variable not bound to the current time");
  bool guard_ok = false;
  try {
    guard_ok = constraints_hold(rule.guard, sigma);
  } catch (const Error& e) {
    throw NotApplicable(rule.name + ": " + e.what());
  }
  if (!guard_ok) throw NotApplicable(rule.name + ": guard fails under " + render(sigma));

  std::vector<TimedFact> pool = config.facts();
  auto take = [&](const TimedPattern& p, bool remove) {
    TimedFact want;
    try {
      auto t = sigma.times.find(p.time_var);
      if (t == sigma.times.end()) throw Error("unbound time variable " + p.time_var);
      want = {instantiate(p.fact, sigma), t->second};
    } catch (const Error& e) {
      throw NotApplicable(rule.name + ": " + e.what());
    }
    auto hit = std::find(pool.begin(), pool.end(), want);
    if (hit == pool.end()) throw NotApplicable(rule.name + ": " + render(want) + " not present");
    if (remove) pool.erase(hit);
    return want;
  };
  // preserved facts must be present alongside the consumed ones
  std::vector<TimedFact> kept;
  for (const auto& p : rule.preserved) kept.push_back(take(p, true));
  for (const auto& p : rule.consumed) take(p, true);
  pool.insert(pool.end(), kept.begin(), kept.end());

  const Substitution full = with_fresh(rule, sigma, nonces);
  for (const auto& c : rule.created) {
    Fact f;
    try {
      f = instantiate(c.fact, full);
    } catch (const Error& e) {
      throw NotApplicable(rule.name + ": " + e.what());
    }
    if (sig != nullptr && !sig->admits(f)) throw NotApplicable(rule.name + ": creates ill-sorted " + render(f));
    pool.push_back({std::move(f), checked_add(config.global_time(), c.delay)});
  }
  return Configuration(config.global_time(), std::move(pool));
}

namespace {

// Enumerates enabled instances; `visit` returns false to stop early.
void for_each_enabled(const Configuration& config, const SpecModel& spec,
                      const std::function<bool(std::size_t, const Substitution&, std::vector<TimedFact>&&)>& visit) {
  const std::uint64_t nonce_base = next_free_nonce(config);
  const auto& facts = config.facts();
  for (std::size_t ri = 0; ri < spec.rules.size(); ++ri) {
    const Rule& rule = spec.rules[ri];
    const auto lhs = rule.lhs();
    const std::size_t consumed_from = 1 + rule.preserved.size();
    bool stop = false;
    for_each_match(lhs, config, {}, [&](const Substitution& s, const std::vector<std::size_t>& used) {
      if (!constraints_hold(rule.guard, s)) return true;
      Substitution full = s;
      std::uint64_t id = nonce_base;
      for (const auto& f : rule.fresh) full.fresh.emplace(f, Term::nonce(id++));
      std::vector<TimedFact> created;
      for (const auto& c : rule.created) {
        Fact f = instantiate(c.fact, full);
        if (!spec.signature.admits(f)) return true;
        created.push_back({std::move(f), checked_add(config.global_time(), c.delay)});
      }
      std::vector<bool> gone(facts.size(), false);
      for (std::size_t i = consumed_from; i < used.size(); ++i) gone[used[i]] = true;
      std::vector<TimedFact> next;
      next.reserve(facts.size());
      for (std::size_t i = 0; i < facts.size(); ++i)
        if (!gone[i]) next.push_back(facts[i]);
      for (auto& c : created) next.push_back(std::move(c));
      if (!visit(ri, full, std::move(next))) {
        stop = true;
        return false;
      }
      return true;
    });
    if (stop) return;
  }
}

}  // namespace

std::vector<StepChoice> enabled_steps(const Configuration& config, const SpecModel& spec) {
  std::vector<StepChoice> out;
  for_each_enabled(config, spec, [&](std::size_t ri, const Substitution& s, std::vector<TimedFact>&& next) {
    out.push_back({ri, s, Configuration(config.global_time(), std::move(next))});
    return true;
  });
  return out;
}

bool must_tick(const Configuration& config, const SpecModel& spec) {
  bool any = false;
  for_each_enabled(config, spec, [&](std::size_t, const Substitution&, std::vector<TimedFact>&&) {
    any = true;
    return false;
  });
  return !any;
}

Selector first_policy() {
  return [](const Configuration&, const std::vector<StepChoice>&) { return std::size_t{0}; };
}

Selector random_policy(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const Configuration&, const std::vector<StepChoice>& choices) {
    return static_cast<std::size_t>((*rng)() % choices.size());
  };
}

Selector scripted_policy(std::vector<std::size_t> picks) {
  auto state = std::make_shared<std::pair<std::vector<std::size_t>, std::size_t>>(std::move(picks), 0);
  return [state](const Configuration&, const std::vector<StepChoice>& choices) {
    auto& [script, pos] = *state;
    std::size_t pick = pos < script.size() ? script[pos] : 0;
    ++pos;
    return pick < choices.size() ? pick : std::size_t{0};
  };
}

Selector prefer_rules_policy(const SpecModel& spec, std::vector<std::string> names) {
  std::vector<std::size_t> rank(spec.rules.size(), names.size());
  for (std::size_t i = 0; i < spec.rules.size(); ++i) {
    auto it = std::find(names.begin(), names.end(), spec.rules[i].name);
    if (it != names.end()) rank[i] = static_cast<std::size_t>(it - names.begin());
  }
  return [rank](const Configuration&, const std::vector<StepChoice>& choices) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < choices.size(); ++i)
      if (rank[choices[i].rule_index] < rank[choices[best].rule_index]) best = i;
    return best;
  };
}

Trace run_lts(const SpecModel& spec, const Configuration& from, const Selector& policy, std::size_t budget) {
  Trace trace;
  trace.initial = from;
  CounterNonces nonces(next_free_nonce(from));
  Configuration cur = from;
  for (std::size_t step = 0; step < budget; ++step) {
    auto choices = enabled_steps(cur, spec);
    TraceStep ts;
    if (choices.empty()) {
      ts.rule_index = kTickRule;
      ts.rule_name = "Tick";
      ts.sigma.times.emplace("T", cur.global_time());
      ts.result = tick(cur);
    } else {
      const auto& pick = choices.at(policy(cur, choices));
      const Rule& rule = spec.rules[pick.rule_index];
      Substitution sigma = pick.sigma;
      sigma.fresh.clear();  // run-wide fresh values instead of the canonical ones
      sigma = with_fresh(rule, sigma, nonces);
      ts.rule_index = static_cast<int>(pick.rule_index);
      ts.rule_name = rule.name;
      ts.result = apply_rule(cur, rule, sigma, nonces, &spec.signature);
      ts.sigma = std::move(sigma);
    }
    cur = ts.result;
    trace.steps.push_back(std::move(ts));
  }
  return trace;
}

}  // namespace tickforge
