#pragma once

#include <string>
#include <vector>

#include "tickforge/syntax.hpp"

namespace tickforge::detail {

std::vector<std::string> signature_problems(const Signature& sig);
std::vector<std::string> rule_problems(const Signature& sig, const Rule& rule);
std::vector<std::string> critical_problems(const Signature& sig, const CriticalPair& pair);
std::vector<std::string> initial_problems(const Signature& sig, const Configuration& init);

// Moves a consumed X@T / created X@T pair into preserved.
void fold_preserved(Rule& rule);
// Adds T >= Ti for every consumed fact not already forced present-or-past.
// Returns the added constraints rendered for notes.
std::vector<std::string> inject_progressing(Rule& rule);

}  // namespace tickforge::detail
