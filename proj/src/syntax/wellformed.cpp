#include "wellformed.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tickforge::detail {

namespace {

class SortChecker {
 public:
  SortChecker(const Signature& sig, std::vector<std::string>& problems) : sig_(sig), problems_(problems) {}

  void fact(const Fact& f, bool allow_nonce_literals) {
    if (f.predicate == kTimePredicate) {
      if (!f.args.empty()) problems_.push_back("Time takes no arguments");
      return;
    }
    const PredicateDecl* p = sig_.find_predicate(f.predicate);
    if (p == nullptr) {
      problems_.push_back("undeclared predicate " + f.predicate);
      return;
    }
    if (p->arg_sorts.size() != f.args.size()) {
      problems_.push_back("predicate " + f.predicate + " expects " + std::to_string(p->arg_sorts.size()) +
                          " arguments, got " + std::to_string(f.args.size()));
      return;
    }
    for (std::size_t i = 0; i < f.args.size(); ++i) term(f.args[i], p->arg_sorts[i], allow_nonce_literals);
  }

  const std::map<std::string, std::string>& var_sorts() const { return vars_; }

 private:
  void term(const Term& t, const std::string& sort, bool allow_nonce_literals) {
    const Sort* s = sig_.find_sort(sort);
    const bool nonce_sort = sort == kNonceSort;
    switch (t.kind) {
      case TermKind::variable: {
        auto [it, inserted] = vars_.emplace(t.name, sort);
        if (!inserted && it->second != sort)
          problems_.push_back("variable " + t.name + " used at sorts " + it->second + " and " + sort);
        if (t.value != 0 && (s == nullptr || !s->numeric))
          problems_.push_back("arithmetic on non-numeric variable " + t.name);
        break;
      }
      case TermKind::numeral:
        if (s == nullptr || !s->numeric)
          problems_.push_back("numeral " + std::to_string(t.value) + " at non-numeric sort " + sort);
        else if (t.value > s->max)
          problems_.push_back("numeral " + std::to_string(t.value) + " outside sort " + sort);
        break;
      case TermKind::constant:
        if (s == nullptr || s->numeric ||
            std::find(s->members.begin(), s->members.end(), t.name) == s->members.end())
          problems_.push_back("constant " + t.name + " is not of sort " + sort);
        break;
      case TermKind::nonce:
        if (!allow_nonce_literals || !nonce_sort) problems_.push_back("nonce literal not allowed here");
        break;
      case TermKind::compound: {
        const FunctionDecl* f = sig_.find_function(t.name);
        if (f == nullptr) {
          problems_.push_back("undeclared function " + t.name);
          break;
        }
        if (f->result_sort != sort) problems_.push_back("function " + t.name + " does not return sort " + sort);
        if (f->arg_sorts.size() != t.args.size()) {
          problems_.push_back("function " + t.name + " arity mismatch");
          break;
        }
        for (std::size_t i = 0; i < t.args.size(); ++i) term(t.args[i], f->arg_sorts[i], allow_nonce_literals);
        break;
      }
    }
  }

  const Signature& sig_;
  std::vector<std::string>& problems_;
  std::map<std::string, std::string> vars_;
};

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::variable) out.insert(t.name);
  for (const auto& a : t.args) collect_vars(a, out);
}

void collect_vars(const Fact& f, std::set<std::string>& out) {
  for (const auto& a : f.args) collect_vars(a, out);
}

}  // namespace

std::vector<std::string> signature_problems(const Signature& sig) {
  std::vector<std::string> out;
  std::set<std::string> sorts, constants, preds, funcs;
  for (const auto& s : sig.sorts) {
    if (s.name == kNonceSort) out.push_back("sort name nonce is reserved");
    if (!sorts.insert(s.name).second) out.push_back("sort " + s.name + " declared twice");
    if (!s.numeric && s.members.empty()) out.push_back("sort " + s.name + " is empty");
    for (const auto& c : s.members)
      if (!constants.insert(c).second) out.push_back("constant " + c + " declared in two sorts");
  }
  auto known_sort = [&](const std::string& n) { return n == kNonceSort || sorts.count(n) > 0; };
  for (const auto& p : sig.predicates) {
    if (p.name == kTimePredicate) out.push_back("Time is built in and cannot be declared");
    if (!preds.insert(p.name).second) out.push_back("predicate " + p.name + " declared twice");
    for (const auto& a : p.arg_sorts)
      if (!known_sort(a)) out.push_back("predicate " + p.name + " uses undeclared sort " + a);
  }
  for (const auto& f : sig.functions) {
    if (!funcs.insert(f.name).second) out.push_back("function " + f.name + " declared twice");
    if (constants.count(f.name)) out.push_back("function " + f.name + " clashes with a constant");
    for (const auto& a : f.arg_sorts)
      if (!known_sort(a)) out.push_back("function " + f.name + " uses undeclared sort " + a);
    if (!sorts.count(f.result_sort)) out.push_back("function " + f.name + " returns undeclared sort");
    else if (sig.find_sort(f.result_sort)->numeric) out.push_back("function " + f.name + " cannot return a numeric sort");
  }
  return out;
}

std::vector<std::string> rule_problems(const Signature& sig, const Rule& rule) {
  std::vector<std::string> out;
  if (rule.kind == RuleKind::tick) {
    if (!rule.preserved.empty() || !rule.consumed.empty() || !rule.created.empty() || !rule.guard.empty() ||
        !rule.fresh.empty())
      out.push_back("Tick is built in and takes no body");
    return out;
  }
  SortChecker sc(sig, out);
  std::set<std::string> lhs_vars, time_vars{rule.time_var};
  for (const auto* list : {&rule.preserved, &rule.consumed}) {
    for (const auto& p : *list) {
      if (p.fact.predicate == kTimePredicate) out.push_back("Time may appear only once on each side");
      sc.fact(p.fact, false);
      collect_vars(p.fact, lhs_vars);
      time_vars.insert(p.time_var);
    }
  }
  std::set<std::string> rhs_vars;
  for (const auto& c : rule.created) {
    if (c.fact.predicate == kTimePredicate) out.push_back("Time may appear only once on each side");
    sc.fact(c.fact, false);
    collect_vars(c.fact, rhs_vars);
  }
  for (const auto& v : time_vars)
    if (lhs_vars.count(v)) out.push_back("variable " + v + " is used both as a term and as a time");
  for (const auto& c : rule.guard) {
    for (const auto* v : {&c.lhs, &c.rhs})
      if (!time_vars.count(*v)) out.push_back("guard variable not in pre-condition: " + *v);
  }
  std::set<std::string> fresh(rule.fresh.begin(), rule.fresh.end());
  if (fresh.size() != rule.fresh.size()) out.push_back("fresh variable declared twice");
  for (const auto& f : rule.fresh) {
    if (lhs_vars.count(f) || time_vars.count(f)) out.push_back("fresh variable on left-hand side: " + f);
    auto it = sc.var_sorts().find(f);
    if (it != sc.var_sorts().end() && it->second != kNonceSort)
      out.push_back("fresh variable " + f + " must have sort nonce");
  }
  for (const auto& v : rhs_vars)
    if (!lhs_vars.count(v) && !fresh.count(v)) out.push_back("unbound variable on right-hand side: " + v);
  return out;
}

std::vector<std::string> critical_problems(const Signature& sig, const CriticalPair& pair) {
  std::vector<std::string> out;
  SortChecker sc(sig, out);
  std::set<std::string> vars, time_vars;
  for (const auto& p : pair.patterns) {
    sc.fact(p.fact, false);
    collect_vars(p.fact, vars);
    time_vars.insert(p.time_var);
  }
  for (const auto& v : time_vars)
    if (vars.count(v)) out.push_back("variable " + v + " is used both as a term and as a time");
  for (const auto& c : pair.constraints) {
    for (const auto* v : {&c.lhs, &c.rhs})
      if (!time_vars.count(*v)) out.push_back("critical constraint mentions unbound time variable " + *v);
  }
  if (pair.patterns.empty()) out.push_back("critical pattern is empty");
  return out;
}

std::vector<std::string> initial_problems(const Signature& sig, const Configuration& init) {
  std::vector<std::string> out;
  for (const auto& f : init.facts()) {
    if (!f.fact.is_ground()) out.push_back("initial fact " + render(f) + " is not ground");
    else if (!sig.admits(f.fact)) out.push_back("initial fact " + render(f) + " is not well sorted");
  }
  return out;
}

void fold_preserved(Rule& rule) {
  for (std::size_t i = 0; i < rule.created.size();) {
    const auto& c = rule.created[i];
    auto it = std::find_if(rule.consumed.begin(), rule.consumed.end(), [&](const TimedPattern& p) {
      return c.delay == 0 && p.time_var == rule.time_var && p.fact == c.fact;
    });
    if (it == rule.consumed.end()) {
      ++i;
      continue;
    }
    rule.preserved.push_back(*it);
    rule.consumed.erase(it);
    rule.created.erase(rule.created.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

std::vector<std::string> inject_progressing(Rule& rule) {
  std::vector<std::string> added;
  for (const auto& p : rule.consumed) {
    if (entails_geq(rule.guard, rule.time_var, p.time_var)) continue;
    Constraint c{rule.time_var, Relation::greater_equal, p.time_var, 0};
    rule.guard.push_back(c);
    added.push_back(render(c));
  }
  return added;
}

}  // namespace tickforge::detail
