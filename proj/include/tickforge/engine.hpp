#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tickforge/core.hpp"
#include "tickforge/syntax.hpp"

namespace tickforge {

struct StepChoice {
  std::size_t rule_index = 0;
  Substitution sigma;  // includes the fresh bindings used for `result`
  Configuration result;
};

// Issues nonce identifiers. Implementations must never hand out the same id
// twice, even to concurrent callers.
class NonceSource {
 public:
  virtual ~NonceSource() = default;
  virtual std::uint64_t next() = 0;
};

class CounterNonces final : public NonceSource {
 public:
  explicit CounterNonces(std::uint64_t start = 0) : next_(start) {}
  std::uint64_t next() override { return next_.fetch_add(1, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> next_;
};

// One past the largest nonce id in the configuration (0 if none).
std::uint64_t next_free_nonce(const Configuration& config);

Configuration tick(const Configuration& config);

// Applies one rule instance. Fresh variables missing from sigma are drawn from
// `nonces`. With a signature, created facts must be well sorted (numerals in
// range). Throws NotApplicable when sigma does not describe an enabled instance.
Configuration apply_rule(const Configuration& config, const Rule& rule, const Substitution& sigma,
                         NonceSource& nonces, const Signature* sig = nullptr);

// All instantaneous rule instances, rules in declaration order and matches in
// canonical order. Fresh variables get ids next_free_nonce(config), +1, ...
std::vector<StepChoice> enabled_steps(const Configuration& config, const SpecModel& spec);
bool must_tick(const Configuration& config, const SpecModel& spec);

// Picks one of the (non-empty) enabled choices.
using Selector = std::function<std::size_t(const Configuration&, const std::vector<StepChoice>&)>;

Selector first_policy();
Selector random_policy(std::uint64_t seed);
// Follows the listed choice indices in order, then falls back to the first choice.
Selector scripted_policy(std::vector<std::size_t> picks);
// Takes the first enabled choice whose rule name comes earliest in `names`.
Selector prefer_rules_policy(const SpecModel& spec, std::vector<std::string> names);

// Lazy time sampling: Tick only when nothing else is enabled. Stops after
// `budget` steps. Fresh values come from one run-wide counter.
Trace run_lts(const SpecModel& spec, const Configuration& from, const Selector& policy, std::size_t budget);

std::string trace_to_text(const Trace& trace);
std::string trace_to_json(const Trace& trace);

}  // namespace tickforge
