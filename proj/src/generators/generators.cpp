#include "tickforge/generators.hpp"

#include <json.hpp>
#include <sstream>

namespace tickforge {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string str(std::uint64_t v) { return std::to_string(v); }

const char* action_name(DroneAction a) {
  switch (a) {
    case DroneAction::north: return "north";
    case DroneAction::south: return "south";
    case DroneAction::west: return "west";
    case DroneAction::east: return "east";
    case DroneAction::charge: return "charge";
    case DroneAction::click: return "click";
  }
  return "?";
}

// Position after moving from (x, y); false if it leaves the grid.
bool moved(const DroneParams& p, std::uint64_t x, std::uint64_t y, DroneAction a, std::uint64_t& nx, std::uint64_t& ny) {
  nx = x;
  ny = y;
  switch (a) {
    case DroneAction::north:
      if (y >= p.y_max) return false;
      ny = y + 1;
      return true;
    case DroneAction::south:
      if (y == 0) return false;
      ny = y - 1;
      return true;
    case DroneAction::west:
      if (x == 0) return false;
      nx = x - 1;
      return true;
    case DroneAction::east:
      if (x >= p.x_max) return false;
      nx = x + 1;
      return true;
    default: return false;
  }
}

std::string point_fact(const DroneParams& p, std::size_t i) {
  return "P(p" + str(i + 1) + "," + str(p.points[i].x) + "," + str(p.points[i].y) + ")";
}

// The preserved picture facts of every rule, skipping `except`.
std::vector<std::string> pictures(const DroneParams& p, std::size_t except = SIZE_MAX) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < p.points.size(); ++i)
    if (i != except) out.push_back(point_fact(p, i) + "@T" + str(i + 1));
  return out;
}

void emit_header(std::ostringstream& os, const DroneParams& p, const std::vector<DroneStart>& drones) {
  os << "pragma progressing;\n";
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < std::max<std::size_t>(drones.size(), 1); ++i) ids.push_back("d" + str(i + 1));
  os << "sort Drones = {" << join(ids) << "};\n";
  if (!p.points.empty()) {
    std::vector<std::string> pts;
    for (std::size_t i = 0; i < p.points.size(); ++i) pts.push_back("p" + str(i + 1));
    os << "sort Pts = {" << join(pts) << "};\n";
  }
  os << "sort XCoord = 0.." << p.x_max << ";\n";
  os << "sort YCoord = 0.." << p.y_max << ";\n";
  os << "sort Energy = 0.." << p.e_max << ";\n";
  if (!p.points.empty()) os << "pred P(Pts, XCoord, YCoord);\n";
  os << "pred Dr(Drones, XCoord, YCoord, Energy);\n";

  std::vector<std::string> init{"Time@0"};
  for (std::size_t i = 0; i < p.points.size(); ++i) init.push_back(point_fact(p, i) + "@0");
  for (std::size_t i = 0; i < drones.size(); ++i)
    init.push_back("Dr(d" + str(i + 1) + "," + str(drones[i].x) + "," + str(drones[i].y) + "," +
                   str(drones[i].energy) + ")@0");
  os << "init { " << join(init) << " }\n";
}

void emit_generic_rules(std::ostringstream& os, const DroneParams& p) {
  const auto pics = pictures(p);
  auto rule = [&](const std::string& name, const std::string& from, const std::string& to) {
    std::vector<std::string> lhs{"Time@T"}, rhs{"Time@T"};
    lhs.insert(lhs.end(), pics.begin(), pics.end());
    rhs.insert(rhs.end(), pics.begin(), pics.end());
    lhs.push_back(from + "@T");
    rhs.push_back(to + "@(T + 1)");
    os << "rule " << name << ": " << join(lhs) << " -> " << join(rhs) << ";\n";
  };
  rule("north", "Dr(Id,X,Y,E+1)", "Dr(Id,X,Y+1,E)");
  rule("south", "Dr(Id,X,Y+1,E+1)", "Dr(Id,X,Y,E)");
  rule("west", "Dr(Id,X+1,Y,E+1)", "Dr(Id,X,Y,E)");
  rule("east", "Dr(Id,X,Y,E+1)", "Dr(Id,X+1,Y,E)");
  const std::string bx = str(p.base.x), by = str(p.base.y);
  rule("charge", "Dr(Id," + bx + "," + by + ",E)", "Dr(Id," + bx + "," + by + ",E+1)");
  // the energy sort is bounded, so charging a full battery keeps it full
  const std::string full = "Dr(Id," + bx + "," + by + "," + str(p.e_max) + ")";
  rule("charge_full", full, full);
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    const auto others = pictures(p, i);
    const std::string xi = str(p.points[i].x), yi = str(p.points[i].y), ti = "T" + str(i + 1);
    std::vector<std::string> lhs{"Time@T"}, rhs{"Time@T"};
    lhs.insert(lhs.end(), others.begin(), others.end());
    rhs.insert(rhs.end(), others.begin(), others.end());
    lhs.push_back(point_fact(p, i) + "@" + ti);
    lhs.push_back("Dr(Id," + xi + "," + yi + ",E+1)@T");
    rhs.push_back(point_fact(p, i) + "@T");
    rhs.push_back("Dr(Id," + xi + "," + yi + ",E)@(T + 1)");
    os << "rule click_p" << i + 1 << ": " << join(lhs) << " | { " << ti << " < T } -> " << join(rhs) << ";\n";
  }
}

// Every (drone, position, energy, ages) state the strategy allows, one ground rule each.
void emit_strategy_rules(std::ostringstream& os, const DroneParams& p, std::size_t n_drones) {
  const std::size_t n = p.points.size();
  std::vector<std::uint64_t> ages(n, 0);
  auto emit = [&](const std::string& drone, std::uint64_t x, std::uint64_t y, std::uint64_t e, DroneAction a) {
    DroneState st{drone, x, y, e, ages};
    if (!p.strategy(st, a)) return;
    std::uint64_t nx = x, ny = y, ne = e;
    std::size_t clicked = SIZE_MAX;
    if (a == DroneAction::charge) {
      if (x != p.base.x || y != p.base.y) return;
      ne = std::min(e + 1, p.e_max);
    } else if (a == DroneAction::click) {
      if (e == 0) return;
      for (std::size_t i = 0; i < n; ++i)
        if (p.points[i].x == x && p.points[i].y == y && ages[i] > 0) clicked = i;
      if (clicked == SIZE_MAX) return;
      ne = e - 1;
    } else {
      if (e == 0 || !moved(p, x, y, a, nx, ny)) return;
      ne = e - 1;
    }
    std::string name = std::string(action_name(a)) + "_" + drone + "_" + str(x) + "_" + str(y) + "_" + str(e);
    for (auto v : ages) name += "_" + str(v);
    std::vector<std::string> lhs{"Time@T"}, rhs{"Time@T"}, guard;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string ti = "T" + str(i + 1);
      lhs.push_back(point_fact(p, i) + "@" + ti);
      rhs.push_back(point_fact(p, i) + (i == clicked ? "@T" : "@" + ti));
      guard.push_back("T = " + ti + (ages[i] ? " + " + str(ages[i]) : ""));
    }
    lhs.push_back("Dr(" + drone + "," + str(x) + "," + str(y) + "," + str(e) + ")@T");
    rhs.push_back("Dr(" + drone + "," + str(nx) + "," + str(ny) + "," + str(ne) + ")@(T + 1)");
    os << "rule " << name << ": " << join(lhs);
    if (!guard.empty()) os << " | { " << join(guard) << " }";
    os << " -> " << join(rhs) << ";\n";
  };
  for (std::size_t d = 0; d < n_drones; ++d) {
    const std::string drone = "d" + str(d + 1);
    for (std::uint64_t x = 0; x <= p.x_max; ++x)
      for (std::uint64_t y = 0; y <= p.y_max; ++y)
        for (std::uint64_t e = 0; e <= p.e_max; ++e) {
          std::fill(ages.begin(), ages.end(), 0);
          while (true) {
            for (auto a : {DroneAction::north, DroneAction::south, DroneAction::west, DroneAction::east,
                           DroneAction::charge, DroneAction::click})
              emit(drone, x, y, e, a);
            std::size_t i = 0;
            while (i < n && ages[i] == p.M) ages[i++] = 0;
            if (i == n) break;
            ++ages[i];
          }
        }
  }
}

void emit_wind_rules(std::ostringstream& os, const DroneParams& p) {
  for (const auto& w : p.wind_cells) {
    std::uint64_t nx = 0, ny = 0;
    if (w.direction == DroneAction::charge || w.direction == DroneAction::click)
      throw Error("wind must blow in one of the four directions");
    if (!moved(p, w.at.x, w.at.y, w.direction, nx, ny)) continue;
    os << "rule wind_" << action_name(w.direction) << "_" << w.at.x << "_" << w.at.y << ": Time@T, Dr(Id," << w.at.x
       << "," << w.at.y << ",E)@T -> Time@T, Dr(Id," << nx << "," << ny << ",E)@(T + 1);\n";
  }
}

}  // namespace

SpecModel gen_drone(const DroneParams& p) {
  std::vector<DroneStart> drones = p.drones;
  if (drones.empty() && !p.no_drones) drones.push_back({p.base.x, p.base.y, p.e_max});
  for (const auto& d : drones)
    if (d.x > p.x_max || d.y > p.y_max || d.energy > p.e_max) throw Error("drone starts outside the grid or energy range");
  for (const auto& pt : p.points)
    if (pt.x > p.x_max || pt.y > p.y_max) throw Error("point of interest outside the grid");
  if (p.base.x > p.x_max || p.base.y > p.y_max) throw Error("base station outside the grid");

  std::ostringstream os;
  emit_header(os, p, drones);
  if (p.strategy) emit_strategy_rules(os, p, drones.size());
  else emit_generic_rules(os, p);
  if (p.wind) emit_wind_rules(os, p);
  for (std::size_t i = 0; i < p.points.size(); ++i)
    os << "critical { " << point_fact(p, i) << "@T1, Time@T | { T > T1 + " << p.M << " } }\n";
  os << "critical { Dr(Id,X,Y,0)@T }\n";
  return parse_spec(os.str());
}

namespace {

std::string assignment(int lit) { return "A" + std::to_string(std::abs(lit)) + (lit > 0 ? "_1" : "_0"); }

}  // namespace

SatInstance gen_3sat(const std::vector<Clause>& cnf, bool conp_variant) {
  if (cnf.empty()) throw Error("empty formula");
  int vars = 0;
  for (const auto& c : cnf)
    for (int l : c) {
      if (l == 0) throw Error("literal 0 is not a variable");
      vars = std::max(vars, std::abs(l));
    }
  const std::size_t n = cnf.size();
  std::ostringstream os;
  os << "pragma progressing;\n";
  std::vector<std::string> preds, init{"Time@0"};
  for (int v = 1; v <= vars; ++v) {
    preds.push_back("V" + std::to_string(v));
    preds.push_back("A" + std::to_string(v) + "_1");
    preds.push_back("A" + std::to_string(v) + "_0");
    init.push_back("V" + std::to_string(v) + "@0");
  }
  for (std::size_t j = 0; j <= n; ++j) preds.push_back("I" + str(j));
  init.push_back("I0@0");
  const std::size_t h_chain = 2 * n + 1;
  if (conp_variant) {
    for (std::size_t j = 0; j <= h_chain; ++j) preds.push_back("H" + str(j));
    init.push_back("H0@0");
  }
  for (const auto& pr : preds) os << "pred " << pr << ";\n";
  os << "init { " << join(init) << " }\n";
  for (int v = 1; v <= vars; ++v)
    for (const char* b : {"1", "0"})
      os << "rule set" << v << "_" << b << ": Time@T, V" << v << "@T1 | { T1 <= T } -> Time@T, A" << v << "_" << b
         << "@(T + 1);\n";
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < 3; ++l) {
      const std::string a = assignment(cnf[j][l]);
      os << "rule clause" << j + 1 << "_" << l + 1 << ": Time@T, " << a << "@T1, I" << j << "@T2 | { T1 <= T, T2 <= T } -> Time@T, "
         << a << "@T1, I" << j + 1 << "@(T + 1);\n";
    }
  if (conp_variant) {
    for (std::size_t j = 0; j < h_chain; ++j)
      os << "rule dummy" << j << ": Time@T, H" << j << "@T1 | { T1 <= T } -> Time@T, H" << j + 1 << "@(T + 1);\n";
    os << "critical { I" << n << "@T }\n";
  } else {
    // A clause chain that stops advancing is a failed evaluation.
    for (std::size_t j = 0; j < n; ++j) os << "critical { I" << j << "@T1, Time@T | { T > T1 + 1 } }\n";
  }
  return {parse_spec(os.str()), 2 * n};
}

bool satisfiable(const std::vector<Clause>& cnf) {
  int vars = 0;
  for (const auto& c : cnf)
    for (int l : c) vars = std::max(vars, std::abs(l));
  if (vars > 30) throw Error("too many variables for exhaustive search");
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << vars); ++bits) {
    bool all = true;
    for (const auto& c : cnf) {
      bool any = false;
      for (int l : c) any = any || (((bits >> (std::abs(l) - 1)) & 1U) == (l > 0 ? 1U : 0U));
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

namespace {

const char* kTprime = R"(pred A; pred B; pred C; pred D;
init { Time@0, C@1 }
rule c_to_d: Time@T, C@T1 | { T1 <= T } -> Time@T, D@T;
rule c_to_a: Time@T, C@T1 | { T1 <= T } -> Time@T, A@T;
rule a_to_b: Time@T, A@T1 -> Time@T, B@T;
rule b_to_a: Time@T, B@T1 -> Time@T, A@T;
)";

const char* kLiveNotSurvivable = R"(pragma progressing;
pred A; pred B; pred C; pred D;
init { Time@0, A@0, B@0 }
rule make_c: Time@T, A@T1, B@T2 | { T1 <= T, T2 <= T } -> Time@T, B@T2, C@(T + 1);
rule make_d: Time@T, A@T1, B@T2 | { T1 <= T, T2 <= T } -> Time@T, B@T2, D@(T + 1);
rule restore: Time@T, B@T1, C@T2 | { T1 <= T, T2 <= T } -> Time@T, A@T, B@(T + 1);
critical { B@T, D@T1 }
)";

const char* kRealizableNotViable = R"(pragma progressing;
pred A; pred B; pred C; pred D;
init { Time@0, A@0 }
rule a_to_b: Time@T, A@T1 | { T1 <= T } -> Time@T, B@(T + 1);
rule a_to_c: Time@T, A@T1 | { T1 <= T } -> Time@T, C@(T + 1);
rule b_to_a: Time@T, B@T1 | { T1 <= T } -> Time@T, A@(T + 1);
rule c_to_d: Time@T, C@T1 | { T1 <= T } -> Time@T, D@(T + 1);
critical { D@T }
)";

}  // namespace

std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  auto add = [&](std::string name, std::string desc, SpecModel spec, std::optional<ExpectedVerdicts> ev,
                 std::vector<BoundedExpectation> bounded = {}) {
    const bool prog = analyze(spec).progressing;
    out.push_back({std::move(name), std::move(desc), std::move(spec), prog, ev, std::move(bounded)});
  };
  add("Tprime", "viable but not live: a Tick-free A/B loop is reachable", parse_spec(kTprime),
      ExpectedVerdicts{true, true, true, false});
  add("L_not_S_pts", "live but not survivable: make_d leads straight into a critical state; make_d also waits for B to be present",
      parse_spec(kLiveNotSurvivable), ExpectedVerdicts{true, false, true, true});
  add("Tdoubleprime", "realizable but not viable: C@1 at time 0 is a point of no return",
      parse_spec(kRealizableNotViable), ExpectedVerdicts{true, false, false, false});

  DroneParams small;
  small.x_max = 1;
  small.y_max = 0;
  small.e_max = 4;
  small.points = {{1, 0}};
  small.base = {0, 0};
  small.M = 6;
  add("drone_small", "one drone on a 2x1 grid photographing the far cell", gen_drone(small), std::nullopt);

  const std::vector<Clause> sat{{1, 2, -3}, {-1, 2, 3}};
  auto np = gen_3sat(sat, false);
  add("sat_np_example", "3-SAT encoding, satisfiable formula", np.spec, std::nullopt,
      {{"nZ", np.n_ticks, satisfiable(sat)}});
  std::vector<Clause> unsat;
  for (int m = 0; m < 8; ++m) unsat.push_back({m & 1 ? -1 : 1, m & 2 ? -2 : 2, m & 4 ? -3 : 3});
  auto conp = gen_3sat(unsat, true);
  add("sat_conp_example", "3-SAT encoding with critical goal, unsatisfiable formula", conp.spec, std::nullopt,
      {{"nS", conp.n_ticks, !satisfiable(unsat)}});
  return out;
}

const CorpusEntry& corpus_entry(const std::vector<CorpusEntry>& all, const std::string& name) {
  for (const auto& e : all)
    if (e.name == name) return e;
  throw Error("no corpus entry named " + name);
}

std::string corpus_sidecar_json(const CorpusEntry& e) {
  nlohmann::ordered_json j;
  j["name"] = e.name;
  j["description"] = e.description;
  j["progressing"] = e.progressing;
  if (e.expected) {
    j["expected"] = {{"Z", e.expected->Z}, {"S", e.expected->S}, {"V", e.expected->V}, {"L", e.expected->L}};
  } else {
    j["expected"] = nullptr;
  }
  auto b = nlohmann::ordered_json::array();
  for (const auto& x : e.bounded) b.push_back({{"property", x.property}, {"ticks", x.ticks}, {"holds", x.holds}});
  j["bounded"] = std::move(b);
  return j.dump(2) + "\n";
}

}  // namespace tickforge
