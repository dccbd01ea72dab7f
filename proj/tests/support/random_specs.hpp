#pragma once

#include <cstdint>
#include <string>

#include "tickforge/syntax.hpp"

namespace tickforge::testing {

// Small balanced, nonce-free specs: at most three predicates, at most four
// facts, every timestamp and delay at most 2.
std::string random_spec_text(std::uint64_t seed);
SpecModel random_spec(std::uint64_t seed);

}  // namespace tickforge::testing
