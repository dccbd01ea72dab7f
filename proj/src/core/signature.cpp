#include "tickforge/core.hpp"

#include <algorithm>

namespace tickforge {

const Sort* Signature::find_sort(std::string_view name) const {
  for (const auto& s : sorts)
    if (s.name == name) return &s;
  return nullptr;
}

const PredicateDecl* Signature::find_predicate(std::string_view name) const {
  for (const auto& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

const FunctionDecl* Signature::find_function(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const Sort* Signature::sort_of_constant(std::string_view name) const {
  for (const auto& s : sorts) {
    if (std::find(s.members.begin(), s.members.end(), name) != s.members.end()) return &s;
  }
  return nullptr;
}

bool Signature::admits(const Term& t, std::string_view sort) const {
  if (sort == kNonceSort) return t.kind == TermKind::nonce;
  const Sort* s = find_sort(sort);
  if (s == nullptr) return false;
  switch (t.kind) {
    case TermKind::numeral:
      return s->numeric && t.value <= s->max;
    case TermKind::constant:
      return !s->numeric && std::find(s->members.begin(), s->members.end(), t.name) != s->members.end();
    case TermKind::compound: {
      const FunctionDecl* f = find_function(t.name);
      if (f == nullptr || f->result_sort != sort || f->arg_sorts.size() != t.args.size()) return false;
      for (std::size_t i = 0; i < t.args.size(); ++i)
        if (!admits(t.args[i], f->arg_sorts[i])) return false;
      return true;
    }
    default:
      return false;
  }
}

bool Signature::admits(const Fact& f) const {
  if (f.predicate == kTimePredicate) return f.args.empty();
  const PredicateDecl* p = find_predicate(f.predicate);
  if (p == nullptr || p->arg_sorts.size() != f.args.size()) return false;
  for (std::size_t i = 0; i < f.args.size(); ++i)
    if (!admits(f.args[i], p->arg_sorts[i])) return false;
  return true;
}

}  // namespace tickforge
