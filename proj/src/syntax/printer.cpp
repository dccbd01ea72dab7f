#include <sstream>

#include "tickforge/syntax.hpp"

namespace tickforge {

namespace {

void join(std::ostream& os, const std::vector<std::string>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
}

void constraints(std::ostream& os, const std::vector<Constraint>& cs) {
  os << " | { ";
  for (std::size_t i = 0; i < cs.size(); ++i) os << (i ? ", " : "") << render(cs[i]);
  os << " }";
}

}  // namespace

std::string print_spec(const SpecModel& spec) {
  std::ostringstream os;
  if (spec.progressing_pragma) os << "pragma progressing;\n\n";

  for (const auto& s : spec.signature.sorts) {
    os << "sort " << s.name << " = ";
    if (s.numeric) {
      os << "0.." << s.max;
    } else {
      os << "{";
      join(os, s.members);
      os << "}";
    }
    os << ";\n";
  }
  for (const auto& p : spec.signature.predicates) {
    os << "pred " << p.name;
    if (!p.arg_sorts.empty()) {
      os << "(";
      join(os, p.arg_sorts);
      os << ")";
    }
    os << ";\n";
  }
  for (const auto& f : spec.signature.functions) {
    os << "func " << f.name << "(";
    join(os, f.arg_sorts);
    os << ") : " << f.result_sort << ";\n";
  }

  os << "\ninit { ";
  const auto init = spec.initial.all_facts();
  for (std::size_t i = 0; i < init.size(); ++i) os << (i ? ", " : "") << render(init[i]);
  os << " }\n";

  if (!spec.rules.empty()) os << '\n';
  for (const auto& r : spec.rules) {
    os << "rule " << r.name << ": Time@" << r.time_var;
    for (const auto& p : r.preserved) os << ", " << render(p);
    for (const auto& p : r.consumed) os << ", " << render(p);
    if (!r.guard.empty()) constraints(os, r.guard);
    os << " -> ";
    if (!r.fresh.empty()) {
      os << "exists ";
      join(os, r.fresh);
      os << ". ";
    }
    os << "Time@" << r.time_var;
    for (const auto& p : r.preserved) os << ", " << render(p);
    for (const auto& c : r.created) {
      os << ", " << render(c.fact) << '@';
      if (c.delay == 0) os << r.time_var;
      else os << '(' << r.time_var << " + " << c.delay << ')';
    }
    os << ";\n";
  }

  if (!spec.critical.pairs.empty()) os << '\n';
  for (const auto& pair : spec.critical.pairs) {
    os << "critical { ";
    for (std::size_t i = 0; i < pair.patterns.size(); ++i) os << (i ? ", " : "") << render(pair.patterns[i]);
    if (!pair.constraints.empty()) constraints(os, pair.constraints);
    os << " }\n";
  }
  return os.str();
}

}  // namespace tickforge
