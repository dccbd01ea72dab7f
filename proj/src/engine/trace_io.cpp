#include <json.hpp>
#include <sstream>

#include "tickforge/engine.hpp"

namespace tickforge {

namespace {

nlohmann::ordered_json bindings(const Substitution& s) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  std::map<std::string, std::string> all;
  for (const auto& [k, v] : s.terms) all[k] = render(v);
  for (const auto& [k, v] : s.times) all[k] = std::to_string(v);
  for (const auto& [k, v] : s.fresh) all[k] = render(v);
  for (const auto& [k, v] : all) j[k] = v;
  return j;
}

}  // namespace

std::string trace_to_text(const Trace& trace) {
  std::ostringstream os;
  os << "0 init {} -> " << render(trace.initial) << '\n';
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    os << i + 1 << ' ' << s.rule_name << ' ' << render(s.sigma) << " -> " << render(s.result) << '\n';
  }
  return os.str();
}

std::string trace_to_json(const Trace& trace) {
  nlohmann::ordered_json j;
  j["initial"] = render(trace.initial);
  j["ticks"] = trace.tick_count();
  auto steps = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    nlohmann::ordered_json e;
    e["index"] = i + 1;
    e["rule"] = s.rule_name;
    e["bindings"] = bindings(s.sigma);
    e["configuration"] = render(s.result);
    steps.push_back(std::move(e));
  }
  j["steps"] = std::move(steps);
  return j.dump(2) + "\n";
}

}  // namespace tickforge
