#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tickforge {

using Timestamp = std::uint64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A rule instance was applied outside its preconditions. Always a bug in the caller.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

class ResourceExhausted : public Error {
 public:
  using Error::Error;
};

inline constexpr std::string_view kTimePredicate = "Time";
inline constexpr std::string_view kNonceSort = "nonce";

// Checked natural-number arithmetic on timestamps and numerals.
Timestamp checked_add(Timestamp a, std::uint64_t b);

enum class TermKind : std::uint8_t { numeral, constant, compound, nonce, variable };

struct Term {
  TermKind kind = TermKind::constant;
  std::string name;         // constant, function symbol or variable name
  std::uint64_t value = 0;  // numeral value, nonce id, or c in the pattern `X + c`
  std::vector<Term> args;   // compound arguments

  static Term constant(std::string name);
  static Term numeral(std::uint64_t v);
  static Term variable(std::string name, std::uint64_t offset = 0);
  static Term nonce(std::uint64_t id);
  static Term compound(std::string fn, std::vector<Term> args);

  bool is_ground() const;
  bool operator==(const Term&) const = default;
};

// Total order: numerals by value, then constants, compounds, nonces, variables.
int compare(const Term& a, const Term& b);
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

struct Fact {
  std::string predicate;
  std::vector<Term> args;

  bool is_ground() const;
  bool operator==(const Fact&) const = default;
};

int compare(const Fact& a, const Fact& b);
inline bool operator<(const Fact& a, const Fact& b) { return compare(a, b) < 0; }

struct TimedFact {
  Fact fact;
  Timestamp time = 0;
  bool operator==(const TimedFact&) const = default;
};

int compare(const TimedFact& a, const TimedFact& b);
inline bool operator<(const TimedFact& a, const TimedFact& b) { return compare(a, b) < 0; }

std::size_t term_size(const Term& t);
std::size_t fact_size(const Fact& f);

// The Time fact is kept apart as global_time; facts() holds everything else
// in canonical (predicate, arguments, timestamp) order.
class Configuration {
 public:
  Configuration() = default;
  Configuration(Timestamp global_time, std::vector<TimedFact> facts);
  // Accepts a full fact multiset; exactly one nullary Time fact is required.
  static Configuration from_facts(std::vector<TimedFact> all);

  Timestamp global_time() const { return time_; }
  const std::vector<TimedFact>& facts() const { return facts_; }
  std::size_t size() const { return facts_.size() + 1; }
  std::vector<TimedFact> all_facts() const;

  bool operator==(const Configuration&) const = default;

 private:
  Timestamp time_ = 0;
  std::vector<TimedFact> facts_;
};

enum class Relation : std::uint8_t { greater, equal, greater_equal };

// lhs REL rhs + offset, over time variables.
struct Constraint {
  std::string lhs;
  Relation rel = Relation::greater;
  std::string rhs;
  std::int64_t offset = 0;

  bool holds(Timestamp lhs_value, Timestamp rhs_value) const;
  bool operator==(const Constraint&) const = default;
};

struct TimedPattern {
  Fact fact;
  std::string time_var;
  bool operator==(const TimedPattern&) const = default;
};

struct CreatedFact {
  Fact fact;
  std::uint64_t delay = 0;
  bool operator==(const CreatedFact&) const = default;
};

enum class RuleKind : std::uint8_t { tick, instantaneous };

struct Rule {
  std::string name;
  RuleKind kind = RuleKind::instantaneous;
  std::string time_var = "T";  // bound to the global time
  std::vector<TimedPattern> preserved;
  std::vector<TimedPattern> consumed;
  std::vector<CreatedFact> created;
  std::vector<Constraint> guard;
  std::vector<std::string> fresh;

  static Rule tick();
  // Time@T first, then preserved, then consumed.
  std::vector<TimedPattern> lhs() const;
  bool operator==(const Rule&) const = default;
};

struct CriticalPair {
  std::vector<TimedPattern> patterns;
  std::vector<Constraint> constraints;
  bool operator==(const CriticalPair&) const = default;
};

struct CriticalSpec {
  std::vector<CriticalPair> pairs;
  bool empty() const { return pairs.empty(); }
  bool operator==(const CriticalSpec&) const = default;
};

struct Substitution {
  std::map<std::string, Term> terms;
  std::map<std::string, Timestamp> times;
  std::map<std::string, Term> fresh;
  bool operator==(const Substitution&) const = default;
};

// Ground instance of a pattern fact. Unbound variables, or `X + c` bound to a
// non-numeral, raise Error.
Fact instantiate(const Fact& pattern, const Substitution& sigma);

// Every σ with patterns·σ ⊆ config (as multisets), each exactly once, in
// canonical order. `used` lists the matched indices into config.facts(), with
// npos for a Time pattern. Returning false from the callback stops the search.
using MatchCallback = std::function<bool(const Substitution&, const std::vector<std::size_t>& used)>;
void for_each_match(const std::vector<TimedPattern>& patterns, const Configuration& config,
                    const Substitution& seed, const MatchCallback& cb);
std::vector<Substitution> match(const std::vector<TimedPattern>& patterns, const Configuration& config);

// All constraints hold under σ. Unbound time variables raise Error.
bool constraints_hold(const std::vector<Constraint>& cs, const Substitution& sigma);

bool is_critical(const Configuration& config, const CriticalSpec& cs);

// ---- signature ----

struct Sort {
  std::string name;
  bool numeric = false;
  std::uint64_t max = 0;             // numeric sorts: 0..max
  std::vector<std::string> members;  // enumerations
  bool operator==(const Sort&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<std::string> arg_sorts;
  bool operator==(const PredicateDecl&) const = default;
};

struct FunctionDecl {
  std::string name;
  std::vector<std::string> arg_sorts;
  std::string result_sort;
  bool operator==(const FunctionDecl&) const = default;
};

struct Signature {
  std::vector<Sort> sorts;
  std::vector<PredicateDecl> predicates;  // Time is implicit
  std::vector<FunctionDecl> functions;

  const Sort* find_sort(std::string_view name) const;
  const PredicateDecl* find_predicate(std::string_view name) const;
  const FunctionDecl* find_function(std::string_view name) const;
  // Which sort declares this constant, if any.
  const Sort* sort_of_constant(std::string_view name) const;

  // Ground term/fact is well sorted (numerals inside their ranges).
  bool admits(const Term& t, std::string_view sort) const;
  bool admits(const Fact& f) const;

  bool operator==(const Signature&) const = default;
};

// ---- traces ----

inline constexpr int kTickRule = -1;

struct TraceStep {
  int rule_index = kTickRule;
  std::string rule_name;
  Substitution sigma;
  Configuration result;
};

struct Trace {
  Configuration initial;
  std::vector<TraceStep> steps;

  std::size_t tick_count() const;
  const Configuration& last() const { return steps.empty() ? initial : steps.back().result; }
};

// ---- rendering ----

std::string render(const Term& t);
std::string render(const Fact& f);
std::string render(const TimedFact& f);
std::string render(const TimedPattern& p);
std::string render(const Constraint& c);
std::string render(const Configuration& c);  // {Time@t, F@t1, ...}
std::string render(const Substitution& s);   // {X=a, T=3, N=#0}

}  // namespace tickforge
