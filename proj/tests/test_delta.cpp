#include <doctest.h>

#include <thread>

#include "tickforge/delta.hpp"

using namespace tickforge;

namespace {

Fact F(std::string p, std::vector<Term> args = {}) { return Fact{std::move(p), std::move(args)}; }

Configuration s1(std::uint64_t p2_time = 0, std::uint64_t shift = 0) {
  auto n = [](std::uint64_t v) { return Term::numeral(v); };
  auto c = [](const char* s) { return Term::constant(s); };
  return Configuration(4 + shift, {{F("Dr", {c("d1"), n(1), n(2), n(10)}), 4 + shift},
                                   {F("Dr", {c("d2"), n(5), n(5), n(8)}), 4 + shift},
                                   {F("P", {c("p1"), n(1), n(1)}), 3 + shift},
                                   {F("P", {c("p2"), n(5), n(6)}), p2_time + shift}});
}

const char* kTdoubleprime = R"(
pred A; pred B; pred C; pred D;
init { Time@0, A@0 }
rule r9a: Time@T, A@T1 | { T1 <= T } -> Time@T, B@(T + 1);
rule r9b: Time@T, A@T1 | { T1 <= T } -> Time@T, C@(T + 1);
rule r9c: Time@T, B@T1 | { T1 <= T } -> Time@T, A@(T + 1);
rule r9d: Time@T, C@T1 | { T1 <= T } -> Time@T, D@(T + 1);
critical { D@T }
)";

const char* kKeys = R"(
pred K(nonce, nonce);
pred L(nonce);
init { Time@0, K(#0,#1)@0, K(#1,#0)@1, L(#1)@0 }
rule swap: Time@T, K(A,B)@T1, L(A)@T2 | { T1 <= T, T2 <= T } -> exists N. Time@T, K(N,B)@(T + 1), L(B)@T;
rule age: Time@T, L(A)@T1 | { T > T1 + 1 } -> Time@T, L(A)@(T + 2);
)";

// Walks random lazy traces and checks that abstraction commutes with stepping.
void check_bisimulation(const SpecModel& spec, std::uint64_t dmax, std::uint64_t seed, int steps) {
  auto trace = run_lts(spec, spec.initial, random_policy(seed), static_cast<std::size_t>(steps));
  Configuration cur = spec.initial;
  for (const auto& s : trace.steps) {
    const auto ab = abstract_with_map(cur, dmax);
    CHECK(abstract(materialize(ab.rep), dmax) == ab.rep);
    CHECK(delta_must_tick(ab.rep, spec) == must_tick(cur, spec));
    CHECK(delta_enabled(ab.rep, spec).size() == enabled_steps(cur, spec).size());
    DeltaRep via;
    if (s.rule_index == kTickRule) {
      via = delta_tick(ab.rep);
    } else {
      const Rule& r = spec.rules[static_cast<std::size_t>(s.rule_index)];
      via = delta_step(ab.rep, r, ab.translate(s.sigma), &spec.signature);
    }
    CHECK(via == abstract(s.result, dmax));
    cur = s.result;
  }
}

}  // namespace

TEST_CASE("abstraction of the drone configuration") {
  CHECK(abstract(s1(), 1).render() ==
        "[P(p2,5,6) |inf| P(p1,1,1) |1| Dr(d1,1,2,10) |0| Dr(d2,5,5,8) |0| Time]");
  CHECK(abstract(Configuration(7, {}), 1).render() == "[Time]");
  CHECK(abstract(s1(0, 100), 1) == abstract(s1(), 1));
  CHECK(equivalent(abstract(s1(1), 1), abstract(s1(), 1)));
  CHECK_FALSE(equivalent(abstract(s1(2), 1), abstract(s1(), 1)));
  CHECK_FALSE(equivalent(abstract(s1(1), 3), abstract(s1(), 3)));
  CHECK_THROWS_AS(equivalent(abstract(s1(), 1), abstract(s1(), 2)), Error);
}

TEST_CASE("future facts beyond Dmax are rejected") {
  Configuration c(0, {{F("A"), 3}});
  CHECK_THROWS_AS(abstract(c, 2), AbstractionError);
  CHECK(abstract(c, 3).render() == "[Time |3| A]");
}

TEST_CASE("nonce renaming does not change the abstraction") {
  auto k = [](std::uint64_t a, std::uint64_t b) { return F("K", {Term::nonce(a), Term::nonce(b)}); };
  Configuration a(2, {{k(5, 9), 1}, {k(9, 5), 2}, {F("L", {Term::nonce(9)}), 0}});
  Configuration b(2, {{k(0, 1), 1}, {k(1, 0), 2}, {F("L", {Term::nonce(1)}), 0}});
  Configuration c(2, {{k(1, 0), 1}, {k(0, 1), 2}, {F("L", {Term::nonce(0)}), 0}});
  CHECK(abstract(a, 2) == abstract(b, 2));
  CHECK(abstract(a, 2) == abstract(c, 2));
  // same shape with the L fact on the other key is a different state
  Configuration d(2, {{k(5, 9), 1}, {k(9, 5), 2}, {F("L", {Term::nonce(5)}), 0}});
  CHECK_FALSE(abstract(a, 2) == abstract(d, 2));

  // symmetric nonces tied on every signature
  Configuration e(0, {{k(3, 4), 0}, {k(4, 3), 0}});
  Configuration f(0, {{k(8, 2), 0}, {k(2, 8), 0}});
  CHECK(abstract(e, 0) == abstract(f, 0));
}

TEST_CASE("abstract Tick") {
  Configuration past(1, {{F("P"), 0}});
  auto d = abstract(past, 1);
  CHECK(d.render() == "[P |1| Time]");
  CHECK(delta_tick(d).render() == "[P |inf| Time]");

  Configuration future(0, {{F("Q"), 1}});
  auto q = abstract(future, 1);
  CHECK(q.render() == "[Time |1| Q]");
  CHECK(delta_tick(q).render() == "[Q |0| Time]");
}

TEST_CASE("materialize is a representative") {
  auto d = abstract(s1(), 1);
  auto m = materialize(d);
  CHECK(render(m) == "{Time@3, Dr(d1,1,2,10)@3, Dr(d2,5,5,8)@3, P(p1,1,1)@2, P(p2,5,6)@0}");
  CHECK(abstract(m, 1) == d);
}

TEST_CASE("abstract must_tick and criticality") {
  auto spec = parse_spec(R"(
pred A; pred B; pred C; pred D;
init { Time@0, C@1 }
rule r6a: Time@T, C@T1 | { T1 <= T } -> Time@T, D@T;
rule r6b: Time@T, C@T1 | { T1 <= T } -> Time@T, A@T;
)");
  CHECK(delta_must_tick(abstract(spec.initial, 1), spec));
  CHECK_FALSE(delta_must_tick(abstract(tick(spec.initial), 1), spec));

  auto eq = parse_spec(R"(
pred A; pred B;
init { Time@5, A@0, B@5 }
rule r: Time@T, A@T1, B@T2 | { T2 = T1 + 1 } -> Time@T, A@T1, B@T;
)");
  auto eqd = abstract(eq.initial, 1);
  CHECK(eqd.render() == "[A |inf| B |0| Time]");
  CHECK(delta_enabled(eqd, eq).empty());

  CriticalSpec none;
  CHECK_FALSE(delta_critical(abstract(s1(), 1), none));
  auto zero = parse_spec(R"(
sort Drones = {d1};
sort E = 0..3;
pred Dr(Drones, E);
init { Time@0, Dr(d1,0)@0 }
critical { Dr(Id,0)@T }
)");
  CHECK(delta_critical(abstract(zero.initial, 1), zero.critical));
}

TEST_CASE("abstraction commutes with stepping") {
  auto t9 = parse_spec(kTdoubleprime);
  auto keys = parse_spec(kKeys);
  const auto d9 = analyze(t9).dmax;
  const auto dk = analyze(keys).dmax;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    check_bisimulation(t9, d9, seed, 20);
    check_bisimulation(keys, dk, seed, 20);
  }
}

TEST_CASE("count bound") {
  SpecStats a;
  a.m = 1;
  a.k = 1;
  a.dmax = 0;
  a.J = 1;
  a.E = 0;
  CHECK(count_bound(a) == 2);
  SpecStats b;
  b.m = 2;
  b.k = 2;
  b.dmax = 1;
  b.J = 2;
  b.E = 1;
  CHECK(count_bound(b) == 78732);
  auto huge = analyze(parse_spec(kTdoubleprime));
  CHECK(count_bound(huge) > 0);
}

TEST_CASE("store interns concurrently") {
  DeltaStore store;
  std::vector<DeltaRep> reps;
  for (std::uint64_t t = 0; t < 50; ++t) reps.push_back(abstract(Configuration(t, {{F("A"), t % 5}}), 9));
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w)
    workers.emplace_back([&] {
      for (const auto& r : reps) store.intern(r);
    });
  for (auto& w : workers) w.join();
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    bool fresh = true;
    for (std::size_t j = 0; j < i; ++j) fresh = fresh && !(reps[j] == reps[i]);
    distinct += fresh;
  }
  CHECK(store.size() == distinct);
  auto [id, inserted] = store.intern(reps[3]);
  CHECK_FALSE(inserted);
  CHECK(store.at(id) == reps[3]);
}
