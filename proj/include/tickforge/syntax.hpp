#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tickforge/core.hpp"

namespace tickforge {

struct SpecModel {
  Signature signature;
  std::vector<Rule> rules;  // instantaneous rules only; Tick is built in
  CriticalSpec critical;
  Configuration initial;
  bool progressing_pragma = false;
  std::size_t declared_rules = 0;  // `rule` declarations before macro expansion
  std::vector<std::string> notes;  // injected constraints and other non-fatal remarks

  // Structural identity; notes and declared_rules are bookkeeping and ignored.
  bool operator==(const SpecModel& o) const {
    return signature == o.signature && rules == o.rules && critical == o.critical && initial == o.initial &&
           progressing_pragma == o.progressing_pragma;
  }
};

struct SpecStats {
  std::size_t m = 0;
  std::size_t k = 0;
  std::uint64_t dmax = 0;
  std::size_t J = 0;
  std::size_t E = 0;
  bool balanced = false;
  bool progressing = false;
  std::size_t rules = 0;
  std::size_t declared_rules = 0;
};

struct Diagnostic {
  int line = 0;
  int col = 0;
  std::string message;
};

class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

SpecModel parse_spec(std::string_view text);
SpecModel load_spec(const std::filesystem::path& path);
std::string print_spec(const SpecModel& spec);

// Well-formedness checks shared by the parser and programmatic builders:
// sorts, guard variables, fresh variables, initial configuration. Also folds a
// consumed/created pair that is really a preserved fact, and injects the
// progressing constraints when the pragma is on. Throws ParseError.
void finalize_spec(SpecModel& spec);

SpecStats analyze(const SpecModel& spec);

// Does the conjunction `guard` force `lhs >= rhs` over the integers?
bool entails_geq(const std::vector<Constraint>& guard, const std::string& lhs, const std::string& rhs);

}  // namespace tickforge
