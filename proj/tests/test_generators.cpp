#include <doctest.h>

#include <json.hpp>
#include <set>

#include "tickforge/engine.hpp"
#include "tickforge/generators.hpp"

using namespace tickforge;

namespace {

DroneParams grid67() {
  DroneParams p;
  p.x_max = 5;
  p.y_max = 6;
  p.e_max = 10;
  p.points = {{1, 1}, {5, 6}};
  p.M = 4;
  p.drones = {{1, 2, 10}, {5, 5, 8}};
  return p;
}

Configuration at_time_four(std::uint64_t d2y, std::uint64_t d2e) {
  auto n = [](std::uint64_t v) { return Term::numeral(v); };
  auto c = [](const char* s) { return Term::constant(s); };
  return Configuration(4, {{{"Dr", {c("d1"), n(1), n(2), n(10)}}, 4},
                           {{"Dr", {c("d2"), n(5), n(d2y), n(d2e)}}, 4},
                           {{"P", {c("p1"), n(1), n(1)}}, 3},
                           {{"P", {c("p2"), n(5), n(6)}}, 0}});
}

std::size_t clicks(const SpecModel& spec, const std::vector<StepChoice>& cs) {
  std::size_t k = 0;
  for (const auto& c : cs) k += spec.rules[c.rule_index].name.rfind("click", 0) == 0;
  return k;
}

std::multiset<std::string> results(const std::vector<StepChoice>& cs) {
  std::multiset<std::string> out;
  for (const auto& c : cs) out.insert(render(c.result));
  return out;
}

}  // namespace

TEST_CASE("drone scenario on a 6x7 grid") {
  auto spec = gen_drone(grid67());
  auto stats = analyze(spec);
  CHECK(stats.balanced);
  CHECK(stats.progressing);
  CHECK(stats.k == 5 + 6 + 10 + 5);
  CHECK(stats.m == 5);
  CHECK(stats.dmax == 4);

  auto away = enabled_steps(at_time_four(5, 8), spec);
  CHECK(away.size() == 7);
  CHECK(clicks(spec, away) == 0);

  auto over = enabled_steps(at_time_four(6, 7), spec);
  CHECK(over.size() == 7);
  CHECK(clicks(spec, over) == 1);
}

TEST_CASE("drone defaults") {
  DroneParams p;
  auto spec = gen_drone(p);
  auto stats = analyze(spec);
  CHECK(stats.dmax == 1);
  CHECK(render(spec.initial) == "{Time@0, Dr(d1,0,0,2)@0, P(p1,1,0)@0}");
  CHECK(spec.critical.pairs.size() == 2);
  CHECK(print_spec(parse_spec(print_spec(spec))) == print_spec(spec));

  p.no_drones = true;
  auto empty = gen_drone(p);
  CHECK(empty.initial.size() == 2);
  CHECK(must_tick(empty.initial, empty));

  p.drones = {{3, 0, 1}};
  CHECK_THROWS_AS(gen_drone(p), Error);
}

TEST_CASE("wind pushes without spending energy") {
  DroneParams p;
  p.x_max = 2;
  p.y_max = 0;
  p.e_max = 1;
  p.points = {{2, 0}};
  p.drones = {{1, 0, 0}};
  p.wind = true;
  p.wind_cells = {{{1, 0}, DroneAction::east}, {{2, 0}, DroneAction::east}};
  auto spec = gen_drone(p);
  auto steps = enabled_steps(spec.initial, spec);
  REQUIRE(steps.size() == 1);
  CHECK(render(steps[0].result) == "{Time@0, Dr(d1,2,0,0)@1, P(p1,2,0)@0}");
}

TEST_CASE("a permissive strategy behaves like the generic rules") {
  DroneParams p;
  p.x_max = 1;
  p.y_max = 1;
  p.e_max = 3;
  p.points = {{1, 1}, {0, 1}};
  p.M = 3;
  auto generic = gen_drone(p);
  p.strategy = [](const DroneState&, DroneAction) { return true; };
  auto ground = gen_drone(p);
  CHECK(ground.rules.size() > generic.rules.size());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto trace = run_lts(generic, generic.initial, random_policy(seed), 40);
    Configuration cur = generic.initial;
    for (const auto& s : trace.steps) {
      if (is_critical(cur, generic.critical)) break;
      CHECK(results(enabled_steps(cur, generic)) == results(enabled_steps(cur, ground)));
      cur = s.result;
    }
  }

  p.strategy = [](const DroneState& st, DroneAction a) { return a == DroneAction::charge || st.energy > 2; };
  auto picky = gen_drone(p);
  for (const auto& r : picky.rules) CHECK((r.name.rfind("charge", 0) == 0 || r.name.find("_3_") != std::string::npos));
}

TEST_CASE("3-SAT encodings") {
  const std::vector<Clause> f{{1, -2, 3}, {-1, 2, 2}};
  auto np = gen_3sat(f, false);
  CHECK(np.n_ticks == 4);
  CHECK(render(np.spec.initial) == "{Time@0, I0@0, V1@0, V2@0, V3@0}");
  CHECK(np.spec.rules.size() == 6 + 6);
  CHECK(np.spec.critical.pairs.size() == 2);
  auto stats = analyze(np.spec);
  CHECK(stats.balanced);
  CHECK(stats.progressing);

  auto conp = gen_3sat(f, true);
  CHECK(conp.spec.rules.size() == 12 + 5);
  REQUIRE(conp.spec.critical.pairs.size() == 1);
  CHECK(render(conp.spec.critical.pairs[0].patterns[0]) == "I2@T");
  CHECK(analyze(conp.spec).progressing);

  CHECK(satisfiable(f));
  std::vector<Clause> all;
  for (int m = 0; m < 8; ++m) all.push_back({m & 1 ? -1 : 1, m & 2 ? -2 : 2, m & 4 ? -3 : 3});
  CHECK_FALSE(satisfiable(all));
  CHECK_THROWS_AS(gen_3sat({{0, 1, 2}}, false), Error);
}

TEST_CASE("corpus") {
  auto all = corpus();
  CHECK(all.size() == 6);
  const auto& t = corpus_entry(all, "Tprime");
  CHECK_FALSE(t.progressing);
  CHECK(corpus_entry(all, "L_not_S_pts").progressing);
  CHECK(corpus_entry(all, "Tdoubleprime").progressing);
  CHECK_THROWS_AS(corpus_entry(all, "nope"), Error);
  for (const auto& e : all) {
    CHECK(analyze(e.spec).balanced);
    CHECK(parse_spec(print_spec(e.spec)) == e.spec);
    auto j = nlohmann::json::parse(corpus_sidecar_json(e));
    CHECK(j["name"] == e.name);
  }
  CHECK(corpus_entry(all, "sat_conp_example").bounded[0].holds);
}
