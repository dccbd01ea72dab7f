#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tickforge/syntax.hpp"

namespace tickforge::detail {

enum class Tok { ident, number, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::uint64_t number = 0;
  int line = 1;
  int col = 1;
};

// Throws ParseError on the first bad character.
std::vector<Token> lex(std::string_view src);

}  // namespace tickforge::detail
