#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tickforge/syntax.hpp"

namespace tickforge {

struct GridPoint {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
};

struct DroneStart {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t energy = 0;
};

enum class DroneAction { north, south, west, east, charge, click };

// What a strategy sees when deciding whether an action is allowed.
struct DroneState {
  std::string drone;
  std::uint64_t x = 0, y = 0, energy = 0;
  std::vector<std::uint64_t> ages;  // T - Ti for each point, each in 0..M
};

struct WindCell {
  GridPoint at;
  DroneAction direction = DroneAction::east;  // one of the four moves
};

struct DroneParams {
  std::uint64_t x_max = 1, y_max = 1, e_max = 2;
  std::vector<GridPoint> points{{1, 0}};
  GridPoint base{0, 0};
  std::uint64_t M = 1;
  std::vector<DroneStart> drones;  // empty: one drone at the base with full energy
  bool no_drones = false;          // keep `drones` empty instead
  bool wind = false;
  std::vector<WindCell> wind_cells;
  // Null allows everything; otherwise rules are emitted fully ground and only
  // for the states the strategy allows.
  std::function<bool(const DroneState&, DroneAction)> strategy;
};

SpecModel gen_drone(const DroneParams& p);

using Clause = std::array<int, 3>;  // literals ±v, v >= 1

struct SatInstance {
  SpecModel spec;
  std::uint64_t n_ticks = 0;
};

// NP variant: bounded realizability at n_ticks decides satisfiability.
// coNP variant: bounded survivability at n_ticks decides unsatisfiability.
SatInstance gen_3sat(const std::vector<Clause>& cnf, bool conp_variant);

bool satisfiable(const std::vector<Clause>& cnf);

struct ExpectedVerdicts {
  bool Z = false, S = false, V = false, L = false;
};

struct BoundedExpectation {
  std::string property;  // "nZ", "nS" or "nL"
  std::uint64_t ticks = 0;
  bool holds = false;
};

struct CorpusEntry {
  std::string name;
  std::string description;
  SpecModel spec;
  bool progressing = false;
  std::optional<ExpectedVerdicts> expected;  // only where the verdict is known independently
  std::vector<BoundedExpectation> bounded;
};

std::vector<CorpusEntry> corpus();
const CorpusEntry& corpus_entry(const std::vector<CorpusEntry>& all, const std::string& name);

// Expected-verdict sidecar for a corpus entry.
std::string corpus_sidecar_json(const CorpusEntry& e);

}  // namespace tickforge
