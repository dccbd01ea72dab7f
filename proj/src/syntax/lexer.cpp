#include "lexer.hpp"

#include <cctype>
#include <limits>

namespace tickforge::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

}  // namespace

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto fail = [&](const std::string& msg) { throw ParseError({{line, col, msg}}); };

  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Tok::ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::uint64_t v = 0;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        const auto d = static_cast<std::uint64_t>(src[j] - '0');
        if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10) fail("number too large");
        v = v * 10 + d;
        ++j;
      }
      t.kind = Tok::number;
      t.number = v;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      static const char* two[] = {"->", "..", ">=", "<="};
      t.kind = Tok::punct;
      for (const char* p : two) {
        if (src.substr(i, 2) == p) t.text = p;
      }
      if (t.text.empty()) {
        if (std::string_view("{}()[],;:|@+-><=.#").find(c) == std::string_view::npos)
          fail(std::string("unexpected character '") + c + "'");
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

}  // namespace tickforge::detail
