#include <doctest.h>

#include "tickforge/syntax.hpp"

using namespace tickforge;

namespace {

const char* kClick = R"(
sort Pts = {p1, p2};
sort Drones = {d1, d2};
sort Coord = 0..9;
sort Energy = 0..10;
pred P(Pts, Coord, Coord);
pred Dr(Drones, Coord, Coord, Energy);

init { Time@5, Dr(d1,1,2,10)@5, Dr(d2,5,6,7)@5, P(p1,1,1)@3, P(p2,5,6)@0 }

// photo click
rule click: Time@T, P(I,X,Y)@T', Dr(Id,X,Y,E+1)@T | { T' < T } -> Time@T, P(I,X,Y)@T, Dr(Id,X,Y,E)@(T+1);
)";

}  // namespace

TEST_CASE("photo-click rule parses into consumed/created/guard") {
  auto spec = parse_spec(kClick);
  REQUIRE(spec.rules.size() == 1);
  const Rule& r = spec.rules[0];
  CHECK(r.name == "click");
  CHECK(r.preserved.empty());
  REQUIRE(r.consumed.size() == 2);
  CHECK(render(r.consumed[0]) == "P(I,X,Y)@T'");
  CHECK(render(r.consumed[1]) == "Dr(Id,X,Y,E+1)@T");
  REQUIRE(r.created.size() == 2);
  CHECK(render(r.created[0].fact) == "P(I,X,Y)");
  CHECK(r.created[0].delay == 0);
  CHECK(render(r.created[1].fact) == "Dr(Id,X,Y,E)");
  CHECK(r.created[1].delay == 1);
  REQUIRE(r.guard.size() == 1);
  CHECK(r.guard[0] == Constraint{"T", Relation::greater, "T'", 0});
  CHECK(spec.initial.global_time() == 5);
}

TEST_CASE("empty rule section") {
  auto spec = parse_spec("init { Time@0 }");
  CHECK(spec.rules.empty());
  CHECK(spec.initial.size() == 1);
}

TEST_CASE("diagnostics") {
  auto first_message = [](const char* src) {
    try {
      parse_spec(src);
    } catch (const ParseError& e) {
      REQUIRE_FALSE(e.diagnostics().empty());
      return e.diagnostics()[0].message;
    }
    return std::string("no error");
  };
  CHECK(first_message("pred A; init { Time@0, A@0 } rule r: Time@T, A@T1 | { U > T } -> Time@T, A@(T+1);")
            .find("guard variable not in pre-condition") != std::string::npos);
  CHECK(first_message("pred K(nonce); init { Time@0 } rule r: Time@T, K(N)@T1 -> exists N. Time@T, K(N)@(T+1);")
            .find("fresh variable on left-hand side") != std::string::npos);
  CHECK(first_message("pred A; init { Time@0, B@0 }").find("not well sorted") != std::string::npos);
  CHECK(first_message("sort S = {a}; pred A(S); init { Time@0, A(b)@0 }").find("not well sorted") != std::string::npos);
  CHECK(first_message("init { Time@0 } rule r: Time@T -> Time@T, Q@T;").find("undeclared predicate") !=
        std::string::npos);

  try {
    parse_spec("pred A;\ninit { Time@0 }\n  rule r: Time@T, A@T1 -> Time@T, A@T2;");
    FAIL("expected a diagnostic");
  } catch (const ParseError& e) {
    CHECK(e.diagnostics()[0].line == 3);
  }
  try {
    parse_spec("pred A;\ninit { Time@0 $ }");
    FAIL("expected a diagnostic");
  } catch (const ParseError& e) {
    CHECK(e.diagnostics()[0].line == 2);
    CHECK(e.diagnostics()[0].col == 15);
  }
}

TEST_CASE("macro parameters expand at parse time") {
  auto spec = parse_spec(R"(
pred A; pred B;
init { Time@0, A@0 }
rule step[d in 0..2, e in 1..2]: Time@T, A@T1 | { T = T1 + d } -> Time@T, B@(T + e);
)");
  CHECK(spec.declared_rules == 1);
  REQUIRE(spec.rules.size() == 6);
  CHECK(spec.rules[0].name == "step.0.1");
  CHECK(spec.rules[5].name == "step.2.2");
  CHECK(spec.rules[5].guard[0].offset == 2);
  CHECK(spec.rules[5].created[0].delay == 2);
  CHECK(analyze(spec).declared_rules == 1);
}

TEST_CASE("progressing pragma injects the present-or-past constraint once") {
  const char* src = R"(
pragma progressing;
pred A; pred B;
init { Time@0, A@0 }
rule r: Time@T, A@T1 -> Time@T, B@(T + 1);
rule s: Time@T, B@T1 | { T >= T1 + 1 } -> Time@T, A@(T + 1);
)";
  auto spec = parse_spec(src);
  REQUIRE(spec.rules[0].guard.size() == 1);
  CHECK(render(spec.rules[0].guard[0]) == "T >= T1");
  CHECK(spec.rules[1].guard.size() == 1);  // already entailed
  CHECK(spec.notes.size() == 1);
  CHECK(analyze(spec).progressing);
  auto again = parse_spec(print_spec(spec));
  CHECK(again == spec);
}

TEST_CASE("print then parse is the identity") {
  const char* src = R"(
sort Ids = {u, w};
sort N = 0..3;
sort Box = {e};
func wrap(Ids, N) : Box;
pred Key(nonce, Ids);
pred Cnt(N);
pred Held(Box);
pred Go;
init { Time@2, Key(#0,u)@1, Cnt(3)@2, Held(wrap(u,2))@0, Go@3 }
rule issue: Time@T, Key(K,I)@T1, Cnt(X+1)@T2 | { T >= T1, T >= T2, T < T1 + 3 } -> exists M. Time@T, Key(M,I)@(T + 1), Cnt(X)@(T + 2);
rule keep: Time@T, Go@T1, Held(H)@T2 | { T1 = T2 - 1 } -> Time@T, Go@T1, Held(H)@(T + 1);
rule ground: Time@T, Cnt(0)@T1 -> Time@T, Cnt(3)@(T + 1);
critical { Cnt(0)@T }
critical { Key(K,w)@T1, Time@T | { T > T1 + 2 } }
)";
  auto spec = parse_spec(src);
  CHECK(spec.rules[1].preserved.size() == 1);
  CHECK(spec.rules[2].consumed[0].fact.args[0] == Term::numeral(0));
  auto printed = print_spec(spec);
  auto again = parse_spec(printed);
  CHECK(again == spec);
  CHECK(print_spec(again) == printed);
}

TEST_CASE("analyze") {
  auto spec = parse_spec(kClick);
  auto st = analyze(spec);
  CHECK(st.m == 5);
  CHECK(st.J == 3);
  CHECK(st.E == 4 + 2);
  CHECK(st.k == 1 + 1 + 10 + 10 + 11);  // Dr(Drones, 0..9, 0..9, 0..10)
  CHECK(st.balanced);
  CHECK(st.progressing);  // guard T > T' and Dr at T
  CHECK(st.dmax == 5);    // initial timestamps dominate

  auto tprime = parse_spec(R"(
pred A; pred B; pred C; pred D;
init { Time@0, C@1 }
rule r6a: Time@T, C@T1 | { T1 <= T } -> Time@T, D@T;
rule r6b: Time@T, C@T1 | { T1 <= T } -> Time@T, A@T;
rule r6c: Time@T, A@T1 -> Time@T, B@T;
rule r6d: Time@T, B@T1 -> Time@T, A@T;
)");
  auto ts = analyze(tprime);
  CHECK(ts.balanced);
  CHECK_FALSE(ts.progressing);
  CHECK(ts.dmax == 1);
}

TEST_CASE("entailment of present-or-past") {
  CHECK(entails_geq({{"T", Relation::greater, "A", 0}}, "T", "A"));
  CHECK(entails_geq({{"T", Relation::equal, "A", 2}}, "T", "A"));
  CHECK_FALSE(entails_geq({{"T", Relation::equal, "A", -1}}, "T", "A"));
  CHECK(entails_geq({{"T", Relation::greater_equal, "B", 0}, {"B", Relation::greater, "A", 1}}, "T", "A"));
  CHECK_FALSE(entails_geq({}, "T", "A"));
}
