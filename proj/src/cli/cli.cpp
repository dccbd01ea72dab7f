#include "tickforge/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "tickforge/checkers.hpp"
#include "tickforge/engine.hpp"
#include "tickforge/generators.hpp"
#include "tickforge/oracle.hpp"

namespace tickforge {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

// "-" means the standard output.
void emit(const std::string& target, const std::string& text, std::ostream& out) {
  if (target == "-") out << text;
  else write_file(target, text);
}

std::vector<std::uint64_t> numbers(const std::string& text, std::size_t count, const std::string& what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error("bad " + what + " '" + text + "'");
    }
  }
  if (out.size() != count) throw Error("bad " + what + " '" + text + "'");
  return out;
}

DroneAction direction(const std::string& s) {
  if (s == "north") return DroneAction::north;
  if (s == "south") return DroneAction::south;
  if (s == "west") return DroneAction::west;
  if (s == "east") return DroneAction::east;
  throw Error("bad wind direction '" + s + "'");
}

// Clauses separated by ';', literals by spaces, e.g. "1 2 -3; -1 2 3".
std::vector<Clause> parse_cnf(const std::string& text) {
  std::vector<Clause> cnf;
  std::stringstream ss(text);
  std::string clause;
  while (std::getline(ss, clause, ';')) {
    std::stringstream cs(clause);
    std::vector<int> lits;
    int l = 0;
    while (cs >> l) lits.push_back(l);
    if (!cs.eof()) throw Error("bad clause '" + clause + "'");
    if (lits.empty()) continue;
    if (lits.size() != 3) throw Error("clause '" + clause + "' does not have exactly 3 literals");
    cnf.push_back({lits[0], lits[1], lits[2]});
  }
  if (cnf.empty()) throw Error("empty formula");
  return cnf;
}

std::string stats_json(const SpecModel& spec) {
  const SpecStats s = analyze(spec);
  nlohmann::ordered_json j;
  j["balanced"] = s.balanced;
  j["progressing"] = s.progressing;
  j["progressing_pragma"] = spec.progressing_pragma;
  j["m"] = s.m;
  j["k"] = s.k;
  j["dmax"] = s.dmax;
  j["J"] = s.J;
  j["E"] = s.E;
  j["rules"] = s.rules;
  j["declared_rules"] = s.declared_rules;
  if (s.balanced) j["lsigma_bound"] = count_bound(s).str();
  else j["lsigma_bound"] = nullptr;
  j["notes"] = spec.notes;
  return j.dump(2) + "\n";
}

struct Options {
  std::string file;
  std::string property = "z";
  std::optional<std::uint64_t> ticks;
  std::string json_out, dot_out;
  std::size_t threads = 1;
  bool no_timing = false;
  std::size_t steps = 20;
  std::optional<std::uint64_t> seed;
  std::string policy = "first";
  bool trace_json = false;
  std::string output;
  std::optional<std::uint64_t> horizon;

  // gen drone
  std::uint64_t x_max = 1, y_max = 1, e_max = 2, M = 1;
  std::vector<std::string> points, drones, wind_cells;
  std::string base = "0,0";
  bool no_drones = false, wind = false;
  // gen sat
  std::string cnf;
  bool conp = false;
};

int run_validate(const Options& o, std::ostream& out) {
  out << stats_json(load_spec(o.file));
  return kExitHolds;
}

int run_check(const Options& o, std::ostream& out) {
  const SpecModel spec = load_spec(o.file);
  CheckOptions opts;
  opts.ticks = o.ticks;
  opts.graph.threads = o.threads;
  const Verdict v = check(spec, parse_property(o.property), opts);
  const VerdictFormat fmt{!o.no_timing};
  if (o.json_out == "-") {
    out << verdict_to_json(spec, v, fmt);
  } else {
    out << verdict_to_text(spec, v, fmt);
    if (!o.json_out.empty()) write_file(o.json_out, verdict_to_json(spec, v, fmt));
  }
  if (!o.dot_out.empty()) emit(o.dot_out, graph_to_dot(spec, v), out);
  return v.holds ? kExitHolds : kExitFails;
}

int run_trace(const Options& o, std::ostream& out) {
  const SpecModel spec = load_spec(o.file);
  Selector policy;
  if (o.seed) policy = random_policy(*o.seed);
  else if (o.policy == "first") policy = first_policy();
  else throw Error("unknown policy '" + o.policy + "'");
  const Trace t = run_lts(spec, spec.initial, policy, o.steps);
  out << (o.trace_json ? trace_to_json(t) : trace_to_text(t));
  return kExitHolds;
}

int run_gen_drone(const Options& o, std::ostream& out) {
  DroneParams p;
  p.x_max = o.x_max;
  p.y_max = o.y_max;
  p.e_max = o.e_max;
  p.M = o.M;
  if (!o.points.empty()) {
    p.points.clear();
    for (const auto& s : o.points) {
      auto v = numbers(s, 2, "point");
      p.points.push_back({v[0], v[1]});
    }
  }
  auto b = numbers(o.base, 2, "base");
  p.base = {b[0], b[1]};
  for (const auto& s : o.drones) {
    auto v = numbers(s, 3, "drone");
    p.drones.push_back({v[0], v[1], v[2]});
  }
  p.no_drones = o.no_drones;
  p.wind = o.wind || !o.wind_cells.empty();
  for (const auto& s : o.wind_cells) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw Error("bad wind cell '" + s + "' (expected x,y:direction)");
    auto v = numbers(s.substr(0, colon), 2, "wind cell");
    p.wind_cells.push_back({{v[0], v[1]}, direction(s.substr(colon + 1))});
  }
  emit(o.output, print_spec(gen_drone(p)), out);
  return kExitHolds;
}

int run_gen_sat(const Options& o, std::ostream& out) {
  const auto cnf = parse_cnf(o.cnf);
  const SatInstance inst = gen_3sat(cnf, o.conp);
  emit(o.output, print_spec(inst.spec), out);
  if (o.output != "-") {
    nlohmann::ordered_json j;
    j["variant"] = o.conp ? "coNP" : "NP";
    j["property"] = o.conp ? "n-S" : "n-Z";
    j["ticks"] = inst.n_ticks;
    j["satisfiable"] = satisfiable(cnf);
    j["holds"] = o.conp ? !satisfiable(cnf) : satisfiable(cnf);
    write_file(fs::path(o.output).replace_extension(".json"), j.dump(2) + "\n");
  }
  return kExitHolds;
}

int run_gen_corpus(const Options& o, std::ostream& out) {
  const fs::path dir = o.output == "-" ? fs::path("corpus") : fs::path(o.output);
  for (const auto& e : corpus()) {
    write_file(dir / (e.name + ".tmsr"), print_spec(e.spec));
    write_file(dir / (e.name + ".json"), corpus_sidecar_json(e));
    out << (dir / (e.name + ".tmsr")).string() << '\n';
  }
  return kExitHolds;
}

int run_oracle(const Options& o, std::ostream& out) {
  const SpecModel spec = load_spec(o.file);
  const Property p = parse_property(o.property);
  const std::string letter(1, static_cast<char>(std::tolower(static_cast<unsigned char>(property_name(p, false)[0]))));
  const bool holds = oracle_check(spec, letter, o.horizon);
  out << property_name(p, o.horizon.has_value());
  if (o.horizon) out << " (n = " << *o.horizon << ")";
  out << (holds ? " holds" : " fails") << " (oracle, ";
  if (o.horizon) out << oracle_graph(spec, *o.horizon).states.size() << " concrete states)\n";
  else out << oracle_quotient_size(spec) << " quotient states)\n";
  return holds ? kExitHolds : kExitFails;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tickforge: timed multiset rewriting specs, simulation and property checking"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tickforge 0.1.0");
  Options o;
  int (*action)(const Options&, std::ostream&) = nullptr;

  auto* validate = app.add_subcommand("validate", "Parse a spec and print its statistics as JSON");
  validate->add_option("file", o.file, "Spec file (.tmsr)")->required()->check(CLI::ExistingFile);
  validate->callback([&] { action = run_validate; });

  auto* chk = app.add_subcommand("check", "Check a property on the δ-representation graph");
  chk->add_option("file", o.file, "Spec file (.tmsr)")->required()->check(CLI::ExistingFile);
  chk->add_option("-p,--property", o.property, "z, s, v or l")->required();
  chk->add_option("-n,--ticks", o.ticks, "Check the bounded variant with this many ticks");
  chk->add_option("--json", o.json_out, "Write the verdict as JSON ('-' prints it instead of text)");
  chk->add_option("--dot", o.dot_out, "Write the state graph as DOT ('-' for stdout)");
  chk->add_option("--threads", o.threads, "Graph construction workers")->check(CLI::PositiveNumber);
  chk->add_flag("--no-timing", o.no_timing, "Report elapsed_ms as 0 for byte-stable output");
  chk->callback([&] { action = run_check; });

  auto* trace = app.add_subcommand("trace", "Run the lazy time sampling and print the trace");
  trace->add_option("file", o.file, "Spec file (.tmsr)")->required()->check(CLI::ExistingFile);
  trace->add_option("--steps", o.steps, "Maximum number of steps, Ticks included");
  auto* seed = trace->add_option("--seed", o.seed, "Pick enabled instances at random with this seed");
  trace->add_option("--policy", o.policy, "Deterministic policy (first)")->excludes(seed);
  trace->add_flag("--json", o.trace_json, "Print the trace as JSON");
  trace->callback([&] { action = run_trace; });

  auto* gen = app.add_subcommand("gen", "Generate specs");
  gen->require_subcommand(1);
  auto* drone = gen->add_subcommand("drone", "Drone surveillance instance");
  drone->add_option("--x-max", o.x_max, "Largest x coordinate");
  drone->add_option("--y-max", o.y_max, "Largest y coordinate");
  drone->add_option("--energy", o.e_max, "Battery capacity");
  drone->add_option("--max-age", o.M, "Largest allowed picture age M");
  drone->add_option("--point", o.points, "Point of interest x,y (repeatable)");
  drone->add_option("--base", o.base, "Base station x,y");
  drone->add_option("--drone", o.drones, "Drone start x,y,energy (repeatable)");
  drone->add_flag("--no-drones", o.no_drones, "Generate without drones");
  drone->add_flag("--wind", o.wind, "Add wind rules on every cell, pushing east");
  drone->add_option("--wind-cell", o.wind_cells, "Wind at x,y:direction (repeatable)");
  drone->add_option("-o,--output", o.output, "Output file ('-' for stdout)")->required();
  drone->callback([&] { action = run_gen_drone; });
  auto* sat = gen->add_subcommand("sat", "3-SAT encoding");
  sat->add_option("--cnf", o.cnf, "Clauses like \"1 2 -3; -1 2 3\"")->required();
  sat->add_flag("--conp", o.conp, "Survivability (coNP) variant");
  sat->add_option("-o,--output", o.output, "Output file ('-' for stdout); a .json sidecar is written next to it")
      ->required();
  sat->callback([&] { action = run_gen_sat; });
  auto* corp = gen->add_subcommand("corpus", "Write the reference corpus with expected-verdict sidecars");
  corp->add_option("-o,--output", o.output, "Output directory")->required();
  corp->callback([&] { action = run_gen_corpus; });

  auto* orc = app.add_subcommand("oracle", "Brute-force reference verdict (nonce-free specs)");
  orc->add_option("file", o.file, "Spec file (.tmsr)")->required()->check(CLI::ExistingFile);
  orc->add_option("-p,--property", o.property, "z, s, v or l")->required();
  orc->add_option("--horizon", o.horizon, "Bounded variant with this many ticks");
  orc->callback([&] { action = run_oracle; });

  std::vector<std::string> reversed_args(args.rbegin(), args.rend());
  try {
    app.parse(reversed_args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitHolds : kExitUsage;
  }
  try {
    return action(o, out);
  } catch (const ResourceExhausted& e) {
    err << "resource exhausted: " << e.what() << '\n';
    return kExitExhausted;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace tickforge
