#include <json.hpp>
#include <set>
#include <sstream>
#include <tuple>

#include "tickforge/checkers.hpp"

namespace tickforge {

namespace {

std::string rule_name(const SpecModel& spec, int rule) {
  return rule == kTickRule ? "Tick" : spec.rules.at(static_cast<std::size_t>(rule)).name;
}

nlohmann::ordered_json steps_json(const SpecModel& spec, const StateGraph& g, const std::vector<WitnessStep>& steps) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : steps) {
    nlohmann::ordered_json j;
    j["rule"] = rule_name(spec, s.rule);
    j["ticks_before"] = s.layer;
    j["from"] = g.store.at(s.from).render();
    j["to"] = g.store.at(s.to).render();
    arr.push_back(std::move(j));
  }
  return arr;
}

void steps_text(std::ostringstream& os, const SpecModel& spec, const StateGraph& g,
                const std::vector<WitnessStep>& steps) {
  for (const auto& s : steps) os << "  " << rule_name(spec, s.rule) << " -> " << g.store.at(s.to).render() << '\n';
}

}  // namespace

std::string verdict_to_json(const SpecModel& spec, const Verdict& v, const VerdictFormat& fmt) {
  const StateGraph& g = *v.graph;
  nlohmann::ordered_json j;
  j["property"] = property_name(v.property, v.ticks.has_value());
  if (v.ticks) j["ticks"] = *v.ticks;
  else j["ticks"] = nullptr;
  j["holds"] = v.holds;
  j["status"] = v.holds ? "holds" : "fails";
  j["initial"] = g.store.at(g.root).render();
  if (v.holds) {
    j["witness"] = {{"stem", steps_json(spec, g, v.stem)}, {"cycle", steps_json(spec, g, v.cycle)}};
  } else {
    j["counterexample"] = {{"kind", v.counterexample_kind}, {"path", steps_json(spec, g, v.counterexample)}};
  }
  j["nodes"] = v.nodes;
  j["edges"] = v.edges;
  j["lsigma_bound"] = v.lsigma_bound;
  j["progressing"] = v.progressing;
  j["elapsed_ms"] = fmt.timing ? v.elapsed_ms : 0.0;
  return j.dump(2) + "\n";
}

std::string verdict_to_text(const SpecModel& spec, const Verdict& v, const VerdictFormat& fmt) {
  const StateGraph& g = *v.graph;
  std::ostringstream os;
  os << property_name(v.property, v.ticks.has_value());
  if (v.ticks) os << " (n = " << *v.ticks << ")";
  os << (v.holds ? " holds" : " fails") << '\n';
  os << "states " << v.nodes << ", edges " << v.edges << ", bound " << v.lsigma_bound << ", "
     << (v.progressing ? "progressing" : "not progressing");
  if (fmt.timing) os << ", " << static_cast<long long>(v.elapsed_ms) << " ms";
  os << '\n';
  os << "initial " << g.store.at(g.root).render() << '\n';
  if (v.holds) {
    os << "witness stem:\n";
    steps_text(os, spec, g, v.stem);
    if (!v.cycle.empty()) {
      os << "witness cycle:\n";
      steps_text(os, spec, g, v.cycle);
    }
  } else {
    os << "counterexample (" << v.counterexample_kind << "):\n";
    steps_text(os, spec, g, v.counterexample);
  }
  return os.str();
}

std::string graph_to_dot(const SpecModel& spec, const Verdict& v) {
  const StateGraph& g = *v.graph;
  std::set<std::tuple<std::size_t, std::size_t, int>> marked;
  for (const auto* path : {&v.stem, &v.cycle, &v.counterexample})
    for (const auto& s : *path) marked.insert({s.from, s.to, s.rule});
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out;
  };
  std::ostringstream os;
  os << "digraph states {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t n = 0; n < g.size(); ++n) {
    os << "  n" << n << " [label=\"" << escape(g.store.at(n).render()) << "\"";
    if (g.critical[n]) os << ", style=filled, fillcolor=\"#f4b6b6\"";
    if (n == g.root) os << ", penwidth=2";
    os << "];\n";
  }
  for (std::size_t n = 0; n < g.size(); ++n)
    for (const auto& e : g.out[n]) {
      os << "  n" << n << " -> n" << e.to << " [label=\"" << escape(rule_name(spec, e.rule)) << "\"";
      if (e.rule == kTickRule) os << ", style=dashed";
      if (marked.count({n, e.to, e.rule})) os << ", color=blue, penwidth=2";
      os << "];\n";
    }
  os << "}\n";
  return os.str();
}

Trace replay(const SpecModel& spec, const StateGraph& g, const std::vector<WitnessStep>& steps) {
  Trace trace;
  trace.initial = spec.initial;
  Configuration cur = spec.initial;
  CounterNonces nonces(next_free_nonce(cur));
  if (!steps.empty() && !(abstract(cur, g.dmax) == g.store.at(steps.front().from)))
    throw Error("replay does not start at the initial state");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    const DeltaRep& want = g.store.at(s.to);
    auto choices = enabled_steps(cur, spec);
    TraceStep ts;
    ts.rule_index = s.rule;
    ts.rule_name = rule_name(spec, s.rule);
    if (s.rule == kTickRule) {
      if (!choices.empty()) throw Error("step " + std::to_string(i + 1) + ": Tick while instantaneous rules are enabled");
      ts.sigma.times.emplace("T", cur.global_time());
      ts.result = tick(cur);
    } else {
      const Rule& rule = spec.rules.at(static_cast<std::size_t>(s.rule));
      bool found = false;
      for (const auto& c : choices) {
        if (static_cast<int>(c.rule_index) != s.rule || !(abstract(c.result, g.dmax) == want)) continue;
        Substitution sigma = c.sigma;
        sigma.fresh.clear();
        for (const auto& f : rule.fresh) sigma.fresh.emplace(f, Term::nonce(nonces.next()));
        ts.result = apply_rule(cur, rule, sigma, nonces, &spec.signature);
        ts.sigma = std::move(sigma);
        found = true;
        break;
      }
      if (!found) throw Error("step " + std::to_string(i + 1) + ": no instance of " + rule.name + " leads to " + want.render());
    }
    if (!(abstract(ts.result, g.dmax) == want))
      throw Error("step " + std::to_string(i + 1) + ": concrete result leaves the recorded state");
    cur = ts.result;
    trace.steps.push_back(std::move(ts));
  }
  return trace;
}

std::string verify_evidence(const SpecModel& spec, const Verdict& v) {
  const StateGraph& g = *v.graph;
  try {
    if (v.holds) {
      std::vector<WitnessStep> steps = v.stem;
      for (int round = 0; round < 2; ++round) steps.insert(steps.end(), v.cycle.begin(), v.cycle.end());
      const Trace t = replay(spec, g, steps);
      if (is_critical(t.initial, spec.critical)) return "initial configuration is critical";
      for (const auto& s : t.steps)
        if (is_critical(s.result, spec.critical)) return "witness visits critical " + render(s.result);
      if (v.ticks) {
        if (t.tick_count() != *v.ticks) return "witness has " + std::to_string(t.tick_count()) + " ticks";
        return "";
      }
      if (v.cycle.empty()) return "lasso without a cycle";
      if (v.cycle.back().to != v.cycle.front().from) return "cycle does not close";
      if (!v.stem.empty() && v.stem.back().to != v.cycle.front().from) return "stem does not reach the cycle";
      bool ticks = false;
      for (const auto& s : v.cycle) ticks = ticks || s.rule == kTickRule;
      if (!ticks) return "cycle does not let time pass";
      return "";
    }
    const Trace t = replay(spec, g, v.counterexample);
    const Configuration& end = t.last();
    const std::string& kind = v.counterexample_kind;
    if (kind == "initial-critical") return is_critical(spec.initial, spec.critical) ? "" : "initial configuration is fine";
    if (kind == "no-compliant-trace-to-bound" || kind == "no-compliant-infinite-time-trace") return "";
    if (kind == "critical-on-infinite-time-trace" || kind == "critical-within-bound")
      return is_critical(end, spec.critical) ? "" : "counterexample ends outside the critical states";
    for (const auto& s : t.steps)
      if (is_critical(s.result, spec.critical)) return "counterexample path is not compliant";
    if (kind == "point-of-no-return") {
      const std::size_t last = v.counterexample.empty() ? g.root : v.counterexample.back().to;
      return is_point_of_no_return(g, last) ? "" : "end state is not a point of no return";
    }
    if (kind == "not-extendable" || kind == "cannot-reach-bound") {
      // a second check on concrete runs: the state must not be critical
      return is_critical(end, spec.critical) ? "end state is critical" : "";
    }
    return "unknown counterexample kind " + kind;
  } catch (const Error& e) {
    return e.what();
  }
}

}  // namespace tickforge
