#include "tickforge/core.hpp"

#include <algorithm>
#include <limits>

namespace tickforge {

Timestamp checked_add(Timestamp a, std::uint64_t b) {
  if (a > std::numeric_limits<Timestamp>::max() - b) throw Error("timestamp overflow");
  return a + b;
}

Term Term::constant(std::string name) {
  Term t;
  t.kind = TermKind::constant;
  t.name = std::move(name);
  return t;
}

Term Term::numeral(std::uint64_t v) {
  Term t;
  t.kind = TermKind::numeral;
  t.value = v;
  return t;
}

Term Term::variable(std::string name, std::uint64_t offset) {
  Term t;
  t.kind = TermKind::variable;
  t.name = std::move(name);
  t.value = offset;
  return t;
}

Term Term::nonce(std::uint64_t id) {
  Term t;
  t.kind = TermKind::nonce;
  t.value = id;
  return t;
}

Term Term::compound(std::string fn, std::vector<Term> args) {
  Term t;
  t.kind = TermKind::compound;
  t.name = std::move(fn);
  t.args = std::move(args);
  return t;
}

bool Term::is_ground() const {
  if (kind == TermKind::variable) return false;
  return std::all_of(args.begin(), args.end(), [](const Term& a) { return a.is_ground(); });
}

bool Fact::is_ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& a) { return a.is_ground(); });
}

namespace {

template <class T>
int three_way(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

int compare_args(const std::vector<Term>& a, const std::vector<Term>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(a[i], b[i])) return c;
  }
  return three_way(a.size(), b.size());
}

}  // namespace

int compare(const Term& a, const Term& b) {
  if (a.kind != b.kind) return three_way(static_cast<int>(a.kind), static_cast<int>(b.kind));
  switch (a.kind) {
    case TermKind::numeral:
    case TermKind::nonce:
      return three_way(a.value, b.value);
    case TermKind::constant:
      return three_way(a.name, b.name);
    case TermKind::variable:
      if (int c = three_way(a.name, b.name)) return c;
      return three_way(a.value, b.value);
    case TermKind::compound:
      if (int c = three_way(a.name, b.name)) return c;
      return compare_args(a.args, b.args);
  }
  return 0;
}

int compare(const Fact& a, const Fact& b) {
  if (int c = three_way(a.predicate, b.predicate)) return c;
  return compare_args(a.args, b.args);
}

int compare(const TimedFact& a, const TimedFact& b) {
  if (int c = compare(a.fact, b.fact)) return c;
  return three_way(a.time, b.time);
}

std::size_t term_size(const Term& t) {
  switch (t.kind) {
    case TermKind::numeral:
      return t.value + 1;  // s^v(z)
    case TermKind::compound: {
      std::size_t n = 1;
      for (const auto& a : t.args) n += term_size(a);
      return n;
    }
    default:
      return 1;
  }
}

std::size_t fact_size(const Fact& f) {
  std::size_t n = 1;
  for (const auto& a : f.args) n += term_size(a);
  return n;
}

Rule Rule::tick() {
  Rule r;
  r.name = "Tick";
  r.kind = RuleKind::tick;
  return r;
}

std::vector<TimedPattern> Rule::lhs() const {
  std::vector<TimedPattern> out;
  out.reserve(1 + preserved.size() + consumed.size());
  out.push_back({Fact{std::string(kTimePredicate), {}}, time_var});
  out.insert(out.end(), preserved.begin(), preserved.end());
  out.insert(out.end(), consumed.begin(), consumed.end());
  return out;
}

bool Constraint::holds(Timestamp lhs_value, Timestamp rhs_value) const {
  const __int128 l = lhs_value;
  const __int128 r = static_cast<__int128>(rhs_value) + offset;
  switch (rel) {
    case Relation::greater:
      return l > r;
    case Relation::equal:
      return l == r;
    case Relation::greater_equal:
      return l >= r;
  }
  return false;
}

std::size_t Trace::tick_count() const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const TraceStep& s) { return s.rule_index == kTickRule; }));
}

}  // namespace tickforge
