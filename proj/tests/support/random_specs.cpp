#include "support/random_specs.hpp"

#include <random>
#include <sstream>
#include <vector>

namespace tickforge::testing {

namespace {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng); }
};

const char* kPreds[] = {"A", "B", "P"};

std::string fact(Gen& g, int pred, bool var_ok) {
  if (pred != 2) return kPreds[pred];
  if (var_ok && g.coin(0.5)) return "P(X)";
  return g.coin(0.5) ? "P(a)" : "P(b)";
}

std::string text(Gen& g) {
  std::ostringstream os;
  if (g.coin(0.3)) os << "pragma progressing;\n";
  os << "sort Obj = {a, b};\npred A; pred B; pred P(Obj);\n";
  const int m = g.pick(1, 4);
  os << "init { Time@" << g.pick(0, 2);
  for (int i = 0; i < m; ++i) os << ", " << fact(g, g.pick(0, 2), false) << '@' << g.pick(0, 2);
  os << " }\n";

  const int rules = g.pick(2, 4);
  for (int r = 0; r < rules; ++r) {
    const int k = g.pick(1, 2);
    bool bound_x = false;
    std::vector<std::string> lhs, rhs, guard;
    for (int i = 1; i <= k; ++i) {
      const int pred = g.pick(0, 2);
      std::string f = fact(g, pred, !bound_x);
      bound_x = bound_x || f == "P(X)";
      const std::string t = "T" + std::to_string(i);
      lhs.push_back(f + "@" + t);
      const bool keep = i > 1 && g.coin(0.4);
      if (keep) {
        if (g.coin(0.5)) guard.push_back(t + " <= T");
        rhs.push_back(f + "@" + t);
        continue;
      }
      switch (g.pick(0, 5)) {
        case 0: break;
        case 1:
        case 2: guard.push_back(t + " <= T"); break;
        case 3: guard.push_back("T >= " + t + " + " + std::to_string(g.pick(1, 2))); break;
        case 4: guard.push_back(t + " = T"); break;
        case 5: guard.push_back(t + " > T"); break;
      }
      const int d = g.coin(0.75) ? g.pick(1, 2) : 0;
      std::string out = fact(g, g.pick(0, 2), bound_x);
      rhs.push_back(out + (d ? "@(T + " + std::to_string(d) + ")" : "@T"));
    }
    auto emit = [&](const std::string& name, const std::vector<std::string>& out) {
      os << "rule " << name << ": Time@T";
      for (const auto& f : lhs) os << ", " << f;
      if (!guard.empty()) {
        os << " | {";
        for (std::size_t i = 0; i < guard.size(); ++i) os << (i ? ", " : " ") << guard[i];
        os << " }";
      }
      os << " -> Time@T";
      for (const auto& f : out) os << ", " << f;
      os << ";\n";
    };
    emit("r" + std::to_string(r), rhs);
    // a sibling with the same left-hand side but another outcome
    if (g.coin(0.6)) {
      for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (lhs[i] == rhs[i]) continue;
        const int d = g.pick(0, 2);
        rhs[i] = fact(g, g.pick(0, 2), bound_x) + (d ? "@(T + " + std::to_string(d) + ")" : "@T");
      }
      emit("r" + std::to_string(r) + "b", rhs);
    }
  }

  const int pairs = g.pick(0, 3);
  for (int c = 0; c < pairs; ++c) {
    switch (g.pick(0, 2)) {
      case 0: os << "critical { " << fact(g, g.pick(0, 2), false) << "@T1 }\n"; break;
      case 1: os << "critical { A@T1, B@T2 | { T2 > T1 + " << g.pick(0, 1) << " } }\n"; break;
      case 2:
        os << "critical { " << fact(g, g.pick(0, 2), false) << "@T1, Time@T | { T > T1 + " << g.pick(1, 2)
           << " } }\n";
        break;
    }
  }
  return os.str();
}

}  // namespace

std::string random_spec_text(std::uint64_t seed) {
  Gen g(seed * 7919 + 17);
  for (;;) {
    std::string t = text(g);
    try {
      // mostly keep specs that do not start in a critical configuration
      if (!is_critical(parse_spec(t).initial, parse_spec(t).critical) || g.coin(0.1)) return t;
    } catch (const Error&) {
    }
  }
}

SpecModel random_spec(std::uint64_t seed) { return parse_spec(random_spec_text(seed)); }

}  // namespace tickforge::testing
