#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "tickforge/cli.hpp"

using namespace tickforge;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli_main(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tickforge_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("corpus files and sidecars") {
  TempDir dir;
  const auto r = run({"gen", "corpus", "-o", dir / "c"});
  REQUIRE(r.code == kExitHolds);
  for (const char* name : {"Tprime", "L_not_S_pts", "Tdoubleprime", "drone_small", "sat_np_example", "sat_conp_example"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir / ("c/" + std::string(name) + ".tmsr")));
    auto side = nlohmann::json::parse(slurp(dir / ("c/" + std::string(name) + ".json")));
    CHECK(side["name"] == name);
  }

  // every corpus file reproduces its sidecar verdicts through the CLI
  for (const char* name : {"Tprime", "L_not_S_pts", "Tdoubleprime"}) {
    auto side = nlohmann::json::parse(slurp(dir / ("c/" + std::string(name) + ".json")));
    for (const char* p : {"Z", "S", "V", "L"}) {
      CAPTURE(name);
      CAPTURE(p);
      const auto c = run({"check", dir / ("c/" + std::string(name) + ".tmsr"), "--property", p, "--no-timing"});
      CHECK(c.code == (side["expected"][p].get<bool>() ? kExitHolds : kExitFails));
    }
  }
}

TEST_CASE("viability counterexample ends at the point of no return") {
  TempDir dir;
  REQUIRE(run({"gen", "corpus", "-o", dir / "c"}).code == kExitHolds);
  const auto r = run({"check", dir / "c/Tdoubleprime.tmsr", "--property", "v", "--json", "-", "--no-timing"});
  CHECK(r.code == kExitFails);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["counterexample"]["kind"] == "point-of-no-return");
  CHECK(j["counterexample"]["path"].back()["to"] == "[Time |1| C]");
}

TEST_CASE("validate reports the drone statistics") {
  TempDir dir;
  REQUIRE(run({"gen", "drone", "-o", dir / "drone.tmsr"}).code == kExitHolds);
  const auto r = run({"validate", dir / "drone.tmsr"});
  REQUIRE(r.code == kExitHolds);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["progressing"] == true);
  CHECK(j["balanced"] == true);
  CHECK(j["dmax"] == 1);
}

TEST_CASE("zero ticks without critical configurations") {
  TempDir dir;
  const auto f = dir.file("x.tmsr", "pred A;\ninit { Time@0, A@0 }\nrule r: Time@T, A@T1 | { T1 <= T } -> Time@T, A@(T + 1);\n");
  CHECK(run({"check", f, "--property", "z", "--ticks", "0"}).code == kExitHolds);
}

TEST_CASE("json and dot outputs are stable") {
  TempDir dir;
  REQUIRE(run({"gen", "corpus", "-o", dir / "c"}).code == kExitHolds);
  const std::string spec = dir / "c/L_not_S_pts.tmsr";
  const auto a = run({"check", spec, "-p", "s", "--json", dir / "a.json", "--dot", dir / "a.dot", "--no-timing"});
  const auto b = run({"check", spec, "-p", "s", "--json", dir / "b.json", "--dot", dir / "b.dot", "--no-timing", "--threads", "3"});
  CHECK(a.code == kExitFails);
  CHECK(a.out == b.out);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(slurp(dir / "a.dot") == slurp(dir / "b.dot"));
  CHECK(slurp(dir / "a.dot").rfind("digraph", 0) == 0);

  const auto t1 = run({"trace", spec, "--steps", "12", "--seed", "9", "--json"});
  const auto t2 = run({"trace", spec, "--steps", "12", "--seed", "9", "--json"});
  CHECK(t1.code == kExitHolds);
  CHECK(t1.out == t2.out);
  CHECK(nlohmann::json::parse(t1.out)["steps"].size() == 12);
}

TEST_CASE("3-SAT generation and the oracle") {
  TempDir dir;
  REQUIRE(run({"gen", "sat", "--cnf", "1 1 1; -1 -1 -1", "-o", dir / "np.tmsr"}).code == kExitHolds);
  auto side = nlohmann::json::parse(slurp(dir / "np.json"));
  CHECK(side["ticks"] == 4);
  CHECK(side["satisfiable"] == false);
  CHECK(run({"check", dir / "np.tmsr", "-p", "z", "-n", "4"}).code == kExitFails);
  CHECK(run({"oracle", dir / "np.tmsr", "-p", "z", "--horizon", "4"}).code == kExitFails);

  REQUIRE(run({"gen", "sat", "--cnf", "1 1 1", "--conp", "-o", dir / "conp.tmsr"}).code == kExitHolds);
  CHECK(run({"check", dir / "conp.tmsr", "-p", "s", "-n", "2"}).code == kExitFails);
  CHECK(run({"oracle", dir / "conp.tmsr", "-p", "z"}).code == kExitHolds);
  CHECK(run({"gen", "sat", "--cnf", "1 2", "-o", dir / "bad.tmsr"}).code == kExitUsage);
}

TEST_CASE("errors and budgets") {
  TempDir dir;
  const auto bad = dir.file("bad.tmsr", "pred A;\ninit { Time@0, A@0 }\nrule r: Time@T, Q@T1 -> Time@T;\n");
  const auto r = run({"validate", bad});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("undeclared predicate Q") != std::string::npos);
  CHECK(run({"check", dir / "missing.tmsr", "-p", "z"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitHolds);

  REQUIRE(run({"gen", "corpus", "-o", dir / "c"}).code == kExitHolds);
  CHECK(run({"check", dir / "c/Tprime.tmsr", "-p", "x"}).code == kExitUsage);
  CHECK(run({"check", dir / "c/Tprime.tmsr", "-p", "v", "-n", "2"}).code == kExitUsage);
  setenv("TICKFORGE_NODE_BUDGET", "3", 1);
  CHECK(run({"check", dir / "c/drone_small.tmsr", "-p", "z"}).code == kExitExhausted);
  unsetenv("TICKFORGE_NODE_BUDGET");

  const auto wind = run({"gen", "drone", "--wind-cell", "0,0:north", "--point", "1,1", "-o", "-"});
  CHECK(wind.code == kExitHolds);
  CHECK(wind.out.find("rule wind_north_0_0") != std::string::npos);
  CHECK(run({"gen", "drone", "--point", "1", "-o", "-"}).code == kExitUsage);
}

TEST_CASE("checked-in specs match the generators") {
  TempDir dir;
  REQUIRE(run({"gen", "corpus", "-o", dir / "c"}).code == kExitHolds);
  for (const auto& f : fs::directory_iterator(dir.path / "c")) {
    CAPTURE(f.path().filename().string());
    CHECK(slurp(f.path().string()) == slurp((fs::path(TICKFORGE_SPECS_DIR) / f.path().filename()).string()));
  }
  REQUIRE(run({"gen", "drone", "-o", dir / "drone.tmsr"}).code == kExitHolds);
  CHECK(slurp(dir / "drone.tmsr") == slurp(std::string(TICKFORGE_SPECS_DIR) + "/drone_default.tmsr"));
  REQUIRE(run({"gen", "sat", "--cnf", "1 2 -3; -1 2 3; -2 -2 3", "-o", dir / "sat.tmsr"}).code == kExitHolds);
  CHECK(slurp(dir / "sat.tmsr") == slurp(std::string(TICKFORGE_SPECS_DIR) + "/sat_three_clauses.tmsr"));
}
