#include "tickforge/core.hpp"

#include <sstream>

namespace tickforge {

namespace {

void put(std::ostream& os, const Term& t) {
  switch (t.kind) {
    case TermKind::numeral:
      os << t.value;
      break;
    case TermKind::nonce:
      os << '#' << t.value;
      break;
    case TermKind::constant:
      os << t.name;
      break;
    case TermKind::variable:
      os << t.name;
      if (t.value != 0) os << '+' << t.value;
      break;
    case TermKind::compound:
      os << t.name << '(';
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) os << ',';
        put(os, t.args[i]);
      }
      os << ')';
      break;
  }
}

void put(std::ostream& os, const Fact& f) {
  os << f.predicate;
  if (f.args.empty()) return;
  os << '(';
  for (std::size_t i = 0; i < f.args.size(); ++i) {
    if (i) os << ',';
    put(os, f.args[i]);
  }
  os << ')';
}

}  // namespace

std::string render(const Term& t) {
  std::ostringstream os;
  put(os, t);
  return os.str();
}

std::string render(const Fact& f) {
  std::ostringstream os;
  put(os, f);
  return os.str();
}

std::string render(const TimedFact& f) {
  std::ostringstream os;
  put(os, f.fact);
  os << '@' << f.time;
  return os.str();
}

std::string render(const TimedPattern& p) { return render(p.fact) + "@" + p.time_var; }

std::string render(const Constraint& c) {
  std::ostringstream os;
  os << c.lhs;
  switch (c.rel) {
    case Relation::greater:
      os << " > ";
      break;
    case Relation::equal:
      os << " = ";
      break;
    case Relation::greater_equal:
      os << " >= ";
      break;
  }
  os << c.rhs;
  if (c.offset > 0) os << " + " << c.offset;
  if (c.offset < 0) os << " - " << -c.offset;
  return os.str();
}

std::string render(const Configuration& c) {
  std::ostringstream os;
  os << "{Time@" << c.global_time();
  for (const auto& f : c.facts()) os << ", " << render(f);
  os << '}';
  return os.str();
}

std::string render(const Substitution& s) {
  std::map<std::string, std::string> all;
  for (const auto& [k, v] : s.terms) all[k] = render(v);
  for (const auto& [k, v] : s.times) all[k] = std::to_string(v);
  for (const auto& [k, v] : s.fresh) all[k] = render(v);
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [k, v] : all) {
    if (!first) os << ", ";
    first = false;
    os << k << '=' << v;
  }
  os << '}';
  return os.str();
}

}  // namespace tickforge
