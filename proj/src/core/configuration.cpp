#include "tickforge/core.hpp"

#include <algorithm>

namespace tickforge {

Configuration::Configuration(Timestamp global_time, std::vector<TimedFact> facts)
    : time_(global_time), facts_(std::move(facts)) {
  for (const auto& f : facts_) {
    if (f.fact.predicate == kTimePredicate) throw Error("configuration holds a second Time fact");
    if (!f.fact.is_ground()) throw Error("configuration fact " + render(f) + " is not ground");
  }
  std::sort(facts_.begin(), facts_.end());
}

Configuration Configuration::from_facts(std::vector<TimedFact> all) {
  std::optional<Timestamp> time;
  std::vector<TimedFact> rest;
  rest.reserve(all.size());
  for (auto& f : all) {
    if (f.fact.predicate == kTimePredicate) {
      if (time) throw Error("configuration has more than one Time fact");
      if (!f.fact.args.empty()) throw Error("Time fact takes no arguments");
      time = f.time;
    } else {
      rest.push_back(std::move(f));
    }
  }
  if (!time) throw Error("configuration has no Time fact");
  return Configuration(*time, std::move(rest));
}

std::vector<TimedFact> Configuration::all_facts() const {
  std::vector<TimedFact> out;
  out.reserve(size());
  out.push_back({Fact{std::string(kTimePredicate), {}}, time_});
  out.insert(out.end(), facts_.begin(), facts_.end());
  return out;
}

}  // namespace tickforge
