#include <doctest.h>

#include <cstdlib>
#include <json.hpp>

#include "tickforge/checkers.hpp"
#include "tickforge/generators.hpp"
#include "tickforge/oracle.hpp"

using namespace tickforge;

namespace {

std::size_t node_of(const StateGraph& g, const Configuration& c) {
  const DeltaRep d = abstract(c, g.dmax);
  for (std::size_t n = 0; n < g.size(); ++n)
    if (g.store.at(n) == d) return n;
  FAIL("state not in graph: " << d.render());
  return 0;
}

void expect(const SpecModel& spec, const ExpectedVerdicts& e) {
  auto g = build_graph(spec);
  auto run = [&](Property p) {
    auto v = check_on(spec, g, p, std::nullopt);
    CHECK_MESSAGE(verify_evidence(spec, v) == "", property_name(p, false));
    return v.holds;
  };
  CHECK(run(Property::Z) == e.Z);
  CHECK(run(Property::S) == e.S);
  CHECK(run(Property::V) == e.V);
  CHECK(run(Property::L) == e.L);
}

}  // namespace

TEST_CASE("corpus verdicts") {
  for (const auto& e : corpus()) {
    if (!e.expected) continue;
    CAPTURE(e.name);
    expect(e.spec, *e.expected);
  }
}

TEST_CASE("points of no return") {
  auto all = corpus();
  const auto& t9 = corpus_entry(all, "Tdoubleprime").spec;
  auto g9 = build_graph(t9);
  CHECK(is_point_of_no_return(*g9, node_of(*g9, Configuration(0, {{{"C", {}}, 1}}))));
  CHECK_FALSE(is_point_of_no_return(*g9, g9->root));

  const auto& t6 = corpus_entry(all, "Tprime").spec;
  auto g6 = build_graph(t6);
  CHECK_FALSE(is_point_of_no_return(*g6, node_of(*g6, Configuration(1, {{{"A", {}}, 1}}))));
  auto l = check_on(t6, g6, Property::L, std::nullopt);
  REQUIRE_FALSE(l.holds);
  CHECK(l.counterexample_kind == "not-extendable");
}

TEST_CASE("survivability counterexample") {
  const auto all = corpus();
  const auto& spec = corpus_entry(all, "L_not_S_pts").spec;
  auto v = check(spec, Property::S);
  REQUIRE_FALSE(v.holds);
  CHECK(v.counterexample_kind == "critical-on-infinite-time-trace");
  REQUIRE(v.counterexample.size() == 1);
  CHECK(v.graph->store.at(v.counterexample.back().to).render() == "[B |0| Time |1| D]");
  CHECK(verify_evidence(spec, v) == "");
}

TEST_CASE("without the wait on B the live-not-survivable system is not realizable") {
  // make_d fires at {Time@1, A@1, B@2}, so the lazy sampling never lets time pass there
  auto spec = parse_spec(R"(
pragma progressing;
pred A; pred B; pred C; pred D;
init { Time@0, A@0, B@0 }
rule make_c: Time@T, A@T1, B@T2 | { T1 <= T, T2 <= T } -> Time@T, B@T2, C@(T + 1);
rule make_d: Time@T, A@T1, B@T2 | { T1 <= T } -> Time@T, B@T2, D@(T + 1);
rule restore: Time@T, B@T1, C@T2 | { T1 <= T, T2 <= T } -> Time@T, A@T, B@(T + 1);
critical { B@T, D@T1 }
)");
  auto v = check(spec, Property::Z);
  CHECK_FALSE(v.holds);
  CHECK(v.counterexample_kind == "no-compliant-infinite-time-trace");
}

TEST_CASE("initial critical state") {
  auto spec = parse_spec(R"(
pred A;
init { Time@0, A@0 }
rule r: Time@T, A@T1 | { T1 <= T } -> Time@T, A@(T + 1);
critical { A@T }
)");
  for (auto p : {Property::Z, Property::S, Property::V, Property::L}) {
    auto v = check(spec, p);
    CHECK_FALSE(v.holds);
    CHECK(v.counterexample_kind == "initial-critical");
  }
  CHECK_FALSE(check(spec, Property::Z, {1, {}}).holds);
}

TEST_CASE("bounded properties") {
  auto all = corpus();
  for (const auto& e : all)
    for (const auto& b : e.bounded) {
      CAPTURE(e.name);
      const Property p = b.property == "nZ" ? Property::Z : b.property == "nS" ? Property::S : Property::L;
      auto v = check(e.spec, p, {b.ticks, {}});
      CHECK(v.holds == b.holds);
      CHECK(verify_evidence(e.spec, v) == "");
    }

  const auto& t9 = corpus_entry(all, "Tdoubleprime").spec;
  for (std::uint64_t n = 0; n <= 4; ++n) {
    CAPTURE(n);
    auto z = check(t9, Property::Z, {n, {}});
    CHECK(z.holds);
    CHECK(verify_evidence(t9, z) == "");
    auto s = check(t9, Property::S, {n, {}});
    CHECK(s.holds == (n < 1));
    auto l = check(t9, Property::L, {n, {}});
    CHECK(l.holds == (n < 2));
    CHECK(verify_evidence(t9, l) == "");
  }
  CHECK_THROWS_AS(check(t9, Property::V, {2, {}}), Error);
}

TEST_CASE("unsatisfiable formula fails bounded realizability") {
  std::vector<Clause> unsat;
  for (int m = 0; m < 8; ++m) unsat.push_back({m & 1 ? -1 : 1, m & 2 ? -2 : 2, m & 4 ? -3 : 3});
  auto np = gen_3sat(unsat, false);
  auto v = check(np.spec, Property::Z, {np.n_ticks, {}});
  CHECK_FALSE(v.holds);
  CHECK(v.counterexample_kind == "no-compliant-trace-to-bound");

  const std::vector<Clause> sat{{1, 2, 3}, {-1, -2, 3}, {1, -3, 2}};
  auto conp = gen_3sat(sat, true);
  auto s = check(conp.spec, Property::S, {conp.n_ticks, {}});
  CHECK_FALSE(s.holds);
  CHECK(s.counterexample_kind == "critical-within-bound");
  CHECK(verify_evidence(conp.spec, s) == "");
  CHECK(check(conp.spec, Property::Z, {conp.n_ticks, {}}).holds);
}

TEST_CASE("limits and refusals") {
  const auto all = corpus();
  const auto& spec = corpus_entry(all, "drone_small").spec;
  CheckOptions tight;
  tight.graph.node_budget = 3;
  CHECK_THROWS_AS(check(spec, Property::Z, tight), ResourceExhausted);

  auto unbalanced = parse_spec(R"(
pred A; pred B;
init { Time@0, A@0 }
rule r: Time@T, A@T1 -> Time@T, A@T1, B@(T + 1);
)");
  CHECK_THROWS_AS(build_graph(unbalanced), Error);

  setenv("TICKFORGE_NODE_BUDGET", "7", 1);
  CHECK(default_node_budget() == 7);
  setenv("TICKFORGE_NODE_BUDGET", "lots", 1);
  CHECK_THROWS_AS(default_node_budget(), Error);
  unsetenv("TICKFORGE_NODE_BUDGET");
  CHECK(default_node_budget() == 5'000'000);
}

TEST_CASE("threads do not change the graph") {
  const auto all = corpus();
  const auto& spec = corpus_entry(all, "drone_small").spec;
  GraphOptions one, four;
  four.threads = 4;
  auto a = build_graph(spec, one);
  auto b = build_graph(spec, four);
  REQUIRE(a->size() == b->size());
  CHECK(a->edge_count() == b->edge_count());
  for (std::size_t n = 0; n < a->size(); ++n) CHECK(a->store.at(n) == b->store.at(n));
}

TEST_CASE("progressing specs agree on V and L") {
  for (const auto& e : corpus()) {
    if (!e.progressing || e.name.rfind("sat_", 0) == 0) continue;
    CAPTURE(e.name);
    auto g = build_graph(e.spec);
    CHECK(check_on(e.spec, g, Property::V, std::nullopt).holds == check_on(e.spec, g, Property::L, std::nullopt).holds);
  }
}

TEST_CASE("state count stays under the bound") {
  for (const auto& e : corpus()) {
    CAPTURE(e.name);
    auto g = build_graph(e.spec);
    CHECK(BigNat(g->size()) <= count_bound(analyze(e.spec)));
  }
}

TEST_CASE("reports") {
  const auto all = corpus();
  const auto& spec = corpus_entry(all, "Tprime").spec;
  auto v = check(spec, Property::Z);
  auto j = nlohmann::json::parse(verdict_to_json(spec, v, {false}));
  CHECK(j["property"] == "Z");
  CHECK(j["holds"] == true);
  CHECK(j["elapsed_ms"] == 0.0);
  CHECK(j["ticks"].is_null());
  CHECK(j["witness"]["cycle"].size() >= 1);
  CHECK(j["progressing"] == false);
  CHECK(verdict_to_text(spec, v, {false}).rfind("Z holds\n", 0) == 0);
  auto dot = graph_to_dot(spec, v);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("color=blue") != std::string::npos);

  auto b = check(spec, Property::L, {3, {}});
  auto jb = nlohmann::json::parse(verdict_to_json(spec, b));
  CHECK(jb["property"] == "n-L");
  CHECK(jb["ticks"] == 3);
  CHECK(property_name(parse_property("S"), true) == "n-S");
  CHECK_THROWS_AS(parse_property("x"), Error);
}

TEST_CASE("drone realizability") {
  DroneParams home;
  home.x_max = 0;
  home.y_max = 0;
  home.e_max = 2;
  home.points = {{0, 0}};
  home.M = 20;
  const auto spec = gen_drone(home);
  const auto z = check(spec, Property::Z);
  CHECK(z.holds);
  CHECK(verify_evidence(spec, z) == "");
  CHECK(oracle_check(spec, "z", std::nullopt));

  DroneParams empty;
  empty.no_drones = true;
  const auto idle = gen_drone(empty);
  CHECK_FALSE(check(idle, Property::Z).holds);
  CHECK_FALSE(oracle_check(idle, "z", std::nullopt));
}
