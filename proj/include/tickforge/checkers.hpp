#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tickforge/delta.hpp"
#include "tickforge/syntax.hpp"

namespace tickforge {

enum class Property { Z, S, V, L };

std::string property_name(Property p, bool bounded);  // "Z" or "n-Z"
Property parse_property(const std::string& s);        // z|s|v|l, any case

// TICKFORGE_NODE_BUDGET when set, otherwise 5,000,000.
std::size_t default_node_budget();

struct GraphOptions {
  std::size_t threads = 1;
  std::size_t node_budget = default_node_budget();
};

struct GraphEdge {
  std::size_t to = 0;
  int rule = kTickRule;
};

// Reachable δ-representations under the lazy time sampling. A node where
// must_tick holds has exactly one Tick edge; otherwise it has one edge per
// distinct (rule, successor).
struct StateGraph {
  DeltaStore store;
  std::vector<std::vector<GraphEdge>> out;
  std::vector<bool> critical;
  std::size_t root = 0;
  std::uint64_t dmax = 0;

  std::size_t size() const { return out.size(); }
  std::size_t edge_count() const;
};

// Throws Error for unbalanced specs and ResourceExhausted past the node budget.
std::shared_ptr<StateGraph> build_graph(const SpecModel& spec, const GraphOptions& opt = {});

struct WitnessStep {
  std::size_t from = 0;
  std::size_t to = 0;
  int rule = kTickRule;
  std::size_t layer = 0;  // ticks taken before this step
};

struct Verdict {
  Property property = Property::Z;
  std::optional<std::uint64_t> ticks;
  bool holds = false;
  // When the property holds: a compliant lasso (unbounded) or a compliant
  // path to the n-th tick (bounded). Empty cycle for bounded witnesses.
  std::vector<WitnessStep> stem, cycle;
  // When it fails: what went wrong and a path from the initial state to it.
  std::string counterexample_kind;
  std::vector<WitnessStep> counterexample;
  std::size_t nodes = 0, edges = 0;
  std::string lsigma_bound;
  bool progressing = false;
  double elapsed_ms = 0;
  std::shared_ptr<const StateGraph> graph;
};

struct CheckOptions {
  std::optional<std::uint64_t> ticks;  // bounded variant when set
  GraphOptions graph;
};

Verdict check(const SpecModel& spec, Property p, const CheckOptions& opt = {});
// Same, reusing a graph built for this spec. Bounded checks refuse to work on
// more than `budget` (state, tick count) pairs.
Verdict check_on(const SpecModel& spec, std::shared_ptr<const StateGraph> g, Property p,
                 std::optional<std::uint64_t> ticks, std::size_t budget = default_node_budget());

// A non-critical state from which no compliant infinite trace starts.
bool is_point_of_no_return(const StateGraph& g, std::size_t node);

struct VerdictFormat {
  bool timing = true;
};

std::string verdict_to_json(const SpecModel& spec, const Verdict& v, const VerdictFormat& fmt = {});
std::string verdict_to_text(const SpecModel& spec, const Verdict& v, const VerdictFormat& fmt = {});
std::string graph_to_dot(const SpecModel& spec, const Verdict& v);

// Replays witness steps on concrete configurations from the initial one:
// every step must be enabled (Tick only when nothing else is), land in the
// recorded δ-representation and draw fresh values run-wide. Returns the
// concrete trace; throws Error on the first mismatch.
Trace replay(const SpecModel& spec, const StateGraph& g, const std::vector<WitnessStep>& steps);

// Replays a verdict's evidence and checks that it shows what the verdict
// claims: stem plus two rounds of the cycle stay compliant and the cycle
// ticks; bounded witnesses reach the tick count; counterexamples end where
// their kind says. Returns an empty string when it does, otherwise the reason.
std::string verify_evidence(const SpecModel& spec, const Verdict& v);

}  // namespace tickforge
