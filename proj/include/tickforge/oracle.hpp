#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tickforge/core.hpp"
#include "tickforge/syntax.hpp"

namespace tickforge {

// Reference implementation written straight from the definitions. It shares
// only the core types and matcher with the main stack and refuses specs that
// generate nonces.

struct OracleGraph {
  std::vector<Configuration> states;
  std::vector<std::vector<std::pair<std::size_t, int>>> edges;  // (target, rule or kTickRule)
  std::size_t root = 0;
};

inline constexpr std::size_t kOracleStateBudget = 200'000;

// Concrete configurations reachable under the lazy time sampling with at most
// `tick_horizon` Ticks. Timestamps are kept as they are.
OracleGraph oracle_graph(const SpecModel& spec, std::uint64_t tick_horizon, std::size_t budget = kOracleStateBudget);

// Unbounded when `ticks` is empty: explores the quotient by the oracle's own
// normal form. `property` is one of z, s, v, l.
bool oracle_check(const SpecModel& spec, const std::string& property, std::optional<std::uint64_t> ticks,
                  std::size_t budget = kOracleStateBudget);

// Number of states of the quotient graph used for unbounded checks.
std::size_t oracle_quotient_size(const SpecModel& spec, std::size_t budget = kOracleStateBudget);

}  // namespace tickforge
