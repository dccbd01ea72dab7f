#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "tickforge/syntax.hpp"
#include "wellformed.hpp"

namespace tickforge {

namespace {

std::string format_diags(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    if (i) os << '\n';
    os << diags[i].line << ':' << diags[i].col << ": " << diags[i].message;
  }
  return os.str();
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diags) : Error(format_diags(diags)), diags_(std::move(diags)) {}

namespace {

using detail::Tok;
using detail::Token;

// A natural number that may still name a macro parameter.
struct Nat {
  std::string param;
  std::uint64_t value = 0;
};

struct RawTerm {
  enum class Kind { num, var, cst, fn, nonce } kind = Kind::cst;
  std::string name;
  Nat num;  // literal value, or the offset of `X + c`
  std::vector<RawTerm> args;
};

struct RawFact {
  std::string pred;
  std::vector<RawTerm> args;
  std::string time_var;  // empty for literal timestamps
  Nat time;              // literal timestamp, or delay in `(T + d)`
  bool delayed = false;
  int line = 0, col = 0;
};

struct RawSide {
  std::string var;
  Nat offset;
  bool negative = false;
};

struct RawConstraint {
  RawSide a;
  std::string op;
  RawSide b;
  int line = 0, col = 0;
};

struct Param {
  std::string name;
  std::uint64_t lo = 0, hi = 0;
};

struct Located {
  int line = 0, col = 0;
};

bool is_var_name(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(detail::lex(src)) {}

  SpecModel run() {
    while (peek().kind != Tok::end) item();
    finish();
    return std::move(spec_);
  }

 private:
  // ---- token helpers ----
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(std::string_view punct) const { return peek().kind == Tok::punct && peek().text == punct; }
  bool at_word(std::string_view w) const { return peek().kind == Tok::ident && peek().text == w; }
  bool accept(std::string_view punct) {
    if (!at(punct)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError({{t.line, t.col, msg}});
  }
  [[noreturn]] void fail_here(const std::string& msg) const {
    const Token& t = peek();
    fail(t, msg + (t.kind == Tok::end ? " at end of input" : " near '" + t.text + "'"));
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail_here("expected '" + std::string(punct) + "'");
  }
  std::string ident() {
    if (peek().kind != Tok::ident) fail_here("expected identifier");
    return next().text;
  }
  std::uint64_t number() {
    if (peek().kind != Tok::number) fail_here("expected number");
    return next().number;
  }
  Nat nat() {
    if (peek().kind == Tok::number) return {"", next().number};
    if (peek().kind == Tok::ident && params_.count(peek().text)) return {next().text, 0};
    fail_here("expected number or parameter");
  }

  // ---- items ----
  void item() {
    const Token& t = peek();
    if (t.kind != Tok::ident) fail_here("expected declaration");
    if (t.text == "pragma") return pragma();
    if (t.text == "sort") return sort();
    if (t.text == "pred") return pred();
    if (t.text == "func") return func();
    if (t.text == "init") return init();
    if (t.text == "rule") return rule();
    if (t.text == "critical") return critical();
    fail_here("expected declaration");
  }

  void pragma() {
    next();
    const Token& t = peek();
    const std::string name = ident();
    if (name != "progressing") fail(t, "unknown pragma " + name);
    spec_.progressing_pragma = true;
    expect(";");
  }

  void sort() {
    next();
    Sort s;
    s.name = ident();
    expect("=");
    if (accept("{")) {
      do {
        const Token& m = peek();
        std::string c = ident();
        if (is_var_name(c)) fail(m, "constants start with a lowercase letter");
        s.members.push_back(std::move(c));
      } while (accept(","));
      expect("}");
    } else {
      const std::uint64_t lo = number();
      if (lo != 0) fail_here("numeric sorts start at 0");
      expect("..");
      s.numeric = true;
      s.max = number();
    }
    expect(";");
    spec_.signature.sorts.push_back(std::move(s));
  }

  std::vector<std::string> sort_list() {
    std::vector<std::string> out;
    expect("(");
    do out.push_back(ident());
    while (accept(","));
    expect(")");
    return out;
  }

  void pred() {
    next();
    PredicateDecl p;
    p.name = ident();
    if (at("(")) p.arg_sorts = sort_list();
    expect(";");
    spec_.signature.predicates.push_back(std::move(p));
  }

  void func() {
    next();
    FunctionDecl f;
    const Token& t = peek();
    f.name = ident();
    if (is_var_name(f.name)) fail(t, "function symbols start with a lowercase letter");
    f.arg_sorts = sort_list();
    expect(":");
    f.result_sort = ident();
    expect(";");
    spec_.signature.functions.push_back(std::move(f));
  }

  void init() {
    const Token& t = next();
    if (init_seen_) fail(t, "init declared twice");
    init_seen_ = true;
    init_pos_ = {t.line, t.col};
    expect("{");
    if (!at("}")) {
      do init_facts_.push_back(fact(FactContext::init));
      while (accept(","));
    }
    expect("}");
    accept(";");
  }

  void rule() {
    const Token& kw = next();
    RawRuleDecl r;
    r.line = kw.line;
    r.col = kw.col;
    r.name = ident();
    while (at(".") && peek(1).kind == Tok::number) {
      next();
      r.name += "." + next().text;
    }
    params_.clear();
    if (accept("[")) {
      do {
        Param p;
        const Token& pt = peek();
        p.name = ident();
        if (is_var_name(p.name)) fail(pt, "parameters start with a lowercase letter");
        if (!at_word("in")) fail_here("expected 'in'");
        next();
        p.lo = number();
        expect("..");
        p.hi = number();
        if (p.hi < p.lo) fail(pt, "empty parameter range");
        if (!params_.insert(p.name).second) fail(pt, "parameter " + p.name + " declared twice");
        r.params.push_back(p);
      } while (accept(","));
      expect("]");
    }
    expect(":");
    do r.lhs.push_back(fact(FactContext::rule));
    while (accept(","));
    if (accept("|")) r.guard = constraint_block();
    expect("->");
    if (at_word("exists")) {
      next();
      do {
        const Token& vt = peek();
        std::string v = ident();
        if (!is_var_name(v)) fail(vt, "fresh variables start with an uppercase letter");
        r.fresh.push_back(std::move(v));
      } while (accept(","));
      expect(".");
    }
    do r.rhs.push_back(fact(FactContext::rule));
    while (accept(","));
    expect(";");
    params_.clear();
    rules_.push_back(std::move(r));
  }

  void critical() {
    const Token& kw = next();
    RawCritical c;
    c.line = kw.line;
    c.col = kw.col;
    expect("{");
    do c.facts.push_back(fact(FactContext::rule));
    while (accept(","));
    if (accept("|")) c.constraints = constraint_block();
    expect("}");
    accept(";");
    criticals_.push_back(std::move(c));
  }

  // ---- facts, terms, constraints ----
  enum class FactContext { init, rule };

  RawFact fact(FactContext ctx) {
    RawFact f;
    const Token& t = peek();
    f.line = t.line;
    f.col = t.col;
    f.pred = ident();
    if (accept("(")) {
      do f.args.push_back(term());
      while (accept(","));
      expect(")");
    }
    expect("@");
    if (ctx == FactContext::init) {
      f.time = {"", number()};
      return f;
    }
    if (accept("(")) {
      const Token& vt = peek();
      f.time_var = ident();
      if (!is_var_name(f.time_var)) fail(vt, "time variables start with an uppercase letter");
      expect("+");
      f.time = nat();
      f.delayed = true;
      expect(")");
    } else {
      const Token& vt = peek();
      f.time_var = ident();
      if (!is_var_name(f.time_var)) fail(vt, "time variables start with an uppercase letter");
    }
    return f;
  }

  RawTerm term() {
    RawTerm t;
    if (accept("#")) {
      t.kind = RawTerm::Kind::nonce;
      t.num = {"", number()};
      return t;
    }
    if (peek().kind == Tok::number) {
      t.kind = RawTerm::Kind::num;
      t.num = {"", next().number};
      return t;
    }
    std::string name = ident();
    if (is_var_name(name)) {
      t.kind = RawTerm::Kind::var;
      t.name = std::move(name);
      if (accept("+")) t.num = nat();
      return t;
    }
    if (params_.count(name)) {
      t.kind = RawTerm::Kind::num;
      t.num = {name, 0};
      return t;
    }
    t.name = std::move(name);
    if (accept("(")) {
      t.kind = RawTerm::Kind::fn;
      do t.args.push_back(term());
      while (accept(","));
      expect(")");
    } else {
      t.kind = RawTerm::Kind::cst;
    }
    return t;
  }

  RawSide side() {
    RawSide s;
    const Token& vt = peek();
    s.var = ident();
    if (!is_var_name(s.var)) fail(vt, "constraints relate time variables");
    if (accept("+")) {
      s.offset = nat();
    } else if (accept("-")) {
      s.offset = nat();
      s.negative = true;
    }
    return s;
  }

  std::vector<RawConstraint> constraint_block() {
    std::vector<RawConstraint> out;
    expect("{");
    if (!at("}")) {
      do {
        RawConstraint c;
        c.line = peek().line;
        c.col = peek().col;
        c.a = side();
        static const std::set<std::string> ops{">", "<", "=", ">=", "<="};
        if (peek().kind != Tok::punct || !ops.count(peek().text)) fail_here("expected comparison");
        c.op = next().text;
        c.b = side();
        out.push_back(std::move(c));
      } while (accept(","));
    }
    expect("}");
    return out;
  }

  // ---- lowering ----
  struct RawRuleDecl {
    std::string name;
    std::vector<Param> params;
    std::vector<RawFact> lhs;
    std::vector<RawConstraint> guard;
    std::vector<std::string> fresh;
    std::vector<RawFact> rhs;
    int line = 0, col = 0;
  };
  struct RawCritical {
    std::vector<RawFact> facts;
    std::vector<RawConstraint> constraints;
    int line = 0, col = 0;
  };

  using Env = std::map<std::string, std::uint64_t>;

  static std::uint64_t value(const Nat& n, const Env& env) { return n.param.empty() ? n.value : env.at(n.param); }

  static Term lower(const RawTerm& t, const Env& env) {
    switch (t.kind) {
      case RawTerm::Kind::num:
        return Term::numeral(value(t.num, env));
      case RawTerm::Kind::var:
        return Term::variable(t.name, value(t.num, env));
      case RawTerm::Kind::cst:
        return Term::constant(t.name);
      case RawTerm::Kind::nonce:
        return Term::nonce(t.num.value);
      case RawTerm::Kind::fn: {
        std::vector<Term> args;
        for (const auto& a : t.args) args.push_back(lower(a, env));
        return Term::compound(t.name, std::move(args));
      }
    }
    return {};
  }

  static Fact lower_fact(const RawFact& f, const Env& env) {
    Fact out{f.pred, {}};
    for (const auto& a : f.args) out.args.push_back(lower(a, env));
    return out;
  }

  static Constraint lower(const RawConstraint& c, const Env& env) {
    auto signed_offset = [&](const RawSide& s) {
      const auto v = static_cast<std::int64_t>(value(s.offset, env));
      return s.negative ? -v : v;
    };
    const std::int64_t sa = signed_offset(c.a), sb = signed_offset(c.b);
    if (c.op == ">") return {c.a.var, Relation::greater, c.b.var, sb - sa};
    if (c.op == ">=") return {c.a.var, Relation::greater_equal, c.b.var, sb - sa};
    if (c.op == "=") return {c.a.var, Relation::equal, c.b.var, sb - sa};
    if (c.op == "<") return {c.b.var, Relation::greater, c.a.var, sa - sb};
    return {c.b.var, Relation::greater_equal, c.a.var, sa - sb};
  }

  void diag(int line, int col, const std::string& msg) { diags_.push_back({line, col, msg}); }

  Rule lower_rule(const RawRuleDecl& r, const Env& env, const std::string& name) {
    Rule rule;
    rule.name = name;
    rule.fresh = r.fresh;
    std::vector<TimedPattern> lhs;
    int time_facts = 0;
    for (const auto& f : r.lhs) {
      if (f.delayed) diag(f.line, f.col, "left-hand side timestamps must be plain time variables");
      if (f.pred == kTimePredicate) {
        ++time_facts;
        rule.time_var = f.time_var;
        if (!f.args.empty()) diag(f.line, f.col, "Time takes no arguments");
        continue;
      }
      lhs.push_back({lower_fact(f, env), f.time_var});
    }
    if (time_facts != 1) diag(r.line, r.col, "rule " + name + " needs exactly one Time fact on the left-hand side");

    std::vector<bool> paired(lhs.size(), false);
    int rhs_time = 0;
    for (const auto& f : r.rhs) {
      if (f.pred == kTimePredicate) {
        ++rhs_time;
        if (f.delayed || f.time_var != rule.time_var)
          diag(f.line, f.col, "Time must keep its timestamp on the right-hand side");
        continue;
      }
      Fact fact = lower_fact(f, env);
      bool done = false;
      if (!f.delayed) {
        for (std::size_t i = 0; i < lhs.size(); ++i) {
          if (!paired[i] && lhs[i].time_var == f.time_var && lhs[i].fact == fact) {
            paired[i] = true;
            done = true;
            break;
          }
        }
      }
      if (done) continue;
      if (f.time_var != rule.time_var) {
        diag(f.line, f.col, "created facts are timestamped relative to the global time " + rule.time_var);
        continue;
      }
      rule.created.push_back({std::move(fact), f.delayed ? value(f.time, env) : 0});
    }
    if (rhs_time != 1) diag(r.line, r.col, "rule " + name + " needs exactly one Time fact on the right-hand side");
    for (std::size_t i = 0; i < lhs.size(); ++i) (paired[i] ? rule.preserved : rule.consumed).push_back(lhs[i]);
    for (const auto& c : r.guard) rule.guard.push_back(lower(c, env));
    return rule;
  }

  void expand(const RawRuleDecl& r) {
    ++spec_.declared_rules;
    Env env;
    std::size_t count = 0;
    auto rec = [&](auto&& self, std::size_t i, std::string name) -> void {
      if (i == r.params.size()) {
        Rule rule = lower_rule(r, env, name);
        for (const auto& p : detail::rule_problems(spec_.signature, rule)) diag(r.line, r.col, rule.name + ": " + p);
        spec_.rules.push_back(std::move(rule));
        ++count;
        return;
      }
      for (std::uint64_t v = r.params[i].lo; v <= r.params[i].hi; ++v) {
        env[r.params[i].name] = v;
        self(self, i + 1, name + "." + std::to_string(v));
      }
    };
    rec(rec, 0, r.name);
    if (!r.params.empty())
      spec_.notes.push_back("rule " + r.name + " expands to " + std::to_string(count) + " rules");
  }

  void finish() {
    for (const auto& p : detail::signature_problems(spec_.signature)) diag(1, 1, p);
    if (!diags_.empty()) throw ParseError(diags_);

    if (!init_seen_) {
      diag(1, 1, "missing init block");
    } else {
      std::vector<TimedFact> facts;
      for (const auto& f : init_facts_) facts.push_back({lower_fact(f, {}), value(f.time, {})});
      try {
        spec_.initial = Configuration::from_facts(std::move(facts));
        for (const auto& p : detail::initial_problems(spec_.signature, spec_.initial))
          diag(init_pos_.line, init_pos_.col, p);
      } catch (const Error& e) {
        diag(init_pos_.line, init_pos_.col, e.what());
      }
    }

    std::set<std::string> names;
    for (const auto& r : rules_) {
      const std::size_t before = spec_.rules.size();
      expand(r);
      for (std::size_t i = before; i < spec_.rules.size(); ++i)
        if (!names.insert(spec_.rules[i].name).second) diag(r.line, r.col, "rule " + spec_.rules[i].name + " declared twice");
    }

    for (const auto& c : criticals_) {
      CriticalPair pair;
      for (const auto& f : c.facts) {
        if (f.delayed) diag(f.line, f.col, "critical patterns use plain time variables");
        pair.patterns.push_back({lower_fact(f, {}), f.time_var});
      }
      for (const auto& k : c.constraints) pair.constraints.push_back(lower(k, {}));
      for (const auto& p : detail::critical_problems(spec_.signature, pair)) diag(c.line, c.col, p);
      spec_.critical.pairs.push_back(std::move(pair));
    }
    if (!diags_.empty()) throw ParseError(diags_);
    finalize_spec(spec_);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> params_;
  SpecModel spec_;
  bool init_seen_ = false;
  Located init_pos_;
  std::vector<RawFact> init_facts_;
  std::vector<RawRuleDecl> rules_;
  std::vector<RawCritical> criticals_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

SpecModel parse_spec(std::string_view text) { return Parser(text).run(); }

SpecModel load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_spec(os.str());
}

void finalize_spec(SpecModel& spec) {
  std::vector<Diagnostic> diags;
  for (const auto& p : detail::signature_problems(spec.signature)) diags.push_back({0, 0, p});
  for (const auto& p : detail::initial_problems(spec.signature, spec.initial)) diags.push_back({0, 0, p});
  for (const auto& r : spec.rules) {
    if (r.kind != RuleKind::instantaneous) diags.push_back({0, 0, "Tick is built in and cannot be declared"});
    for (const auto& p : detail::rule_problems(spec.signature, r)) diags.push_back({0, 0, r.name + ": " + p});
  }
  for (const auto& c : spec.critical.pairs)
    for (const auto& p : detail::critical_problems(spec.signature, c)) diags.push_back({0, 0, p});
  if (!diags.empty()) throw ParseError(diags);

  if (spec.declared_rules == 0) spec.declared_rules = spec.rules.size();
  for (auto& r : spec.rules) {
    detail::fold_preserved(r);
    if (!spec.progressing_pragma) continue;
    for (const auto& c : detail::inject_progressing(r)) {
      std::string note = "rule " + r.name + ": added " + c;
      if (std::find(spec.notes.begin(), spec.notes.end(), note) == spec.notes.end()) spec.notes.push_back(note);
    }
  }
}

}  // namespace tickforge
