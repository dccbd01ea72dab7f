#include "tickforge/delta.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace tickforge {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

void mix(std::uint64_t& h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  mix(h, s.size());
}

void mix(std::uint64_t& h, const Term& t) {
  mix(h, static_cast<std::uint64_t>(t.kind));
  mix(h, t.value);
  mix(h, t.name);
  mix(h, t.args.size());
  for (const auto& a : t.args) mix(h, a);
}

}  // namespace

DeltaRep::DeltaRep(std::vector<Fact> facts, std::vector<std::uint64_t> gaps, std::uint64_t dmax)
    : facts_(std::move(facts)), gaps_(std::move(gaps)), dmax_(dmax) {
  if (facts_.empty() || gaps_.size() + 1 != facts_.size()) throw Error("malformed delta representation");
  std::size_t times = 0;
  for (std::size_t i = 0; i < facts_.size(); ++i) {
    if (facts_[i].predicate == kTimePredicate) {
      ++times;
      time_index_ = i;
    }
  }
  if (times != 1) throw Error("delta representation needs exactly one Time entry");
  std::uint64_t h = kFnvOffset;
  mix(h, dmax_);
  for (std::size_t i = 0; i < facts_.size(); ++i) {
    mix(h, facts_[i].predicate);
    mix(h, facts_[i].args.size());
    for (const auto& a : facts_[i].args) mix(h, a);
    if (i < gaps_.size()) mix(h, gaps_[i]);
  }
  hash_ = h;
}

std::string DeltaRep::render() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < facts_.size(); ++i) {
    if (i) {
      os << " |";
      if (gaps_[i - 1] == kInfiniteGap) os << "inf";
      else os << gaps_[i - 1];
      os << "| ";
    }
    os << tickforge::render(facts_[i]);
  }
  os << ']';
  return os.str();
}

namespace {

void collect_nonces(const Term& t, std::set<std::uint64_t>& out) {
  if (t.kind == TermKind::nonce) out.insert(t.value);
  for (const auto& a : t.args) collect_nonces(a, out);
}

Term rename(const Term& t, const std::map<std::uint64_t, std::uint64_t>& rho) {
  if (t.kind == TermKind::nonce) return Term::nonce(rho.at(t.value));
  Term out = t;
  for (auto& a : out.args) a = rename(a, rho);
  return out;
}

Fact rename(const Fact& f, const std::map<std::uint64_t, std::uint64_t>& rho) {
  Fact out{f.predicate, {}};
  for (const auto& a : f.args) out.args.push_back(rename(a, rho));
  return out;
}

Term blind(const Term& t) {
  if (t.kind == TermKind::nonce) return Term::nonce(0);
  Term out = t;
  for (auto& a : out.args) a = blind(a);
  return out;
}

// Nonce occurrences in a fact with their argument paths.
void occurrences(const Term& t, const std::string& path, std::vector<std::pair<std::uint64_t, std::string>>& out) {
  if (t.kind == TermKind::nonce) out.emplace_back(t.value, path);
  for (std::size_t i = 0; i < t.args.size(); ++i) occurrences(t.args[i], path + "." + std::to_string(i), out);
}

struct Entry {
  std::size_t group;
  Fact fact;
};

// Entries ordered by (group, fact) under a nonce renaming.
std::vector<Entry> arrange(const std::vector<Entry>& entries, const std::map<std::uint64_t, std::uint64_t>& rho) {
  std::vector<Entry> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back({e.group, rho.empty() ? e.fact : rename(e.fact, rho)});
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    if (a.group != b.group) return a.group < b.group;
    return a.fact < b.fact;
  });
  return out;
}

bool less_sequence(const std::vector<Entry>& a, const std::vector<Entry>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (int c = compare(a[i].fact, b[i].fact)) return c < 0;
  }
  return false;
}

// Chooses the nonce renaming. Nonces are ranked by renaming-invariant
// signatures; remaining ties are broken by trying every order inside each tie
// class and keeping the smallest arranged sequence.
std::map<std::uint64_t, std::uint64_t> canonical_renaming(const std::vector<Entry>& entries,
                                                          const std::set<std::uint64_t>& nonces) {
  std::map<std::uint64_t, std::vector<std::string>> sig;
  std::vector<std::vector<std::pair<std::uint64_t, std::string>>> occ(entries.size());
  std::vector<std::string> key(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Fact b{entries[i].fact.predicate, {}};
    for (const auto& a : entries[i].fact.args) b.args.push_back(blind(a));
    key[i] = std::to_string(entries[i].group) + "|" + render(b);
    for (std::size_t j = 0; j < entries[i].fact.args.size(); ++j)
      occurrences(entries[i].fact.args[j], std::to_string(j), occ[i]);
    for (const auto& [n, path] : occ[i]) sig[n].push_back(key[i] + "|" + path);
  }
  auto classes = [&](const std::map<std::uint64_t, std::vector<std::string>>& s) {
    std::set<std::vector<std::string>> distinct;
    for (auto& [n, v] : s) distinct.insert(v);
    std::map<std::uint64_t, std::size_t> cls;
    for (auto& [n, v] : s) cls[n] = static_cast<std::size_t>(std::distance(distinct.begin(), distinct.find(v)));
    return cls;
  };
  for (auto& [n, v] : sig) std::sort(v.begin(), v.end());
  auto cls = classes(sig);
  // one refinement round: who a nonce shares facts with
  std::map<std::uint64_t, std::vector<std::string>> sig2 = sig;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (const auto& [n, path] : occ[i]) {
      std::string s = "~" + key[i] + "|" + path;
      for (const auto& [m, p2] : occ[i])
        if (m != n || p2 != path) s += "|" + p2 + ":" + std::to_string(cls[m]);
      sig2[n].push_back(std::move(s));
    }
  }
  for (auto& [n, v] : sig2) std::sort(v.begin(), v.end());
  cls = classes(sig2);

  std::vector<std::uint64_t> order(nonces.begin(), nonces.end());
  std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) { return cls[a] < cls[b]; });
  std::vector<std::pair<std::size_t, std::size_t>> ties;  // [begin, end) ranges in `order`
  double combos = 1;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && cls[order[j]] == cls[order[i]]) ++j;
    if (j - i > 1) ties.emplace_back(i, j);
    for (std::size_t f = 2; f <= j - i; ++f) combos *= static_cast<double>(f);
    i = j;
  }
  auto to_rho = [&](const std::vector<std::uint64_t>& ord) {
    std::map<std::uint64_t, std::uint64_t> rho;
    for (std::size_t i = 0; i < ord.size(); ++i) rho[ord[i]] = i;
    return rho;
  };
  if (ties.empty() || combos > 40320) return to_rho(order);

  std::vector<std::uint64_t> best_order = order;
  std::vector<Entry> best = arrange(entries, to_rho(order));
  auto rec = [&](auto&& self, std::size_t t) -> void {
    if (t == ties.size()) {
      auto cand = arrange(entries, to_rho(order));
      if (less_sequence(cand, best)) {
        best = std::move(cand);
        best_order = order;
      }
      return;
    }
    auto b = order.begin() + static_cast<std::ptrdiff_t>(ties[t].first);
    auto e = order.begin() + static_cast<std::ptrdiff_t>(ties[t].second);
    std::sort(b, e);
    do self(self, t + 1);
    while (std::next_permutation(b, e));
  };
  rec(rec, 0);
  return to_rho(best_order);
}

}  // namespace

Abstraction abstract_with_map(const Configuration& config, std::uint64_t dmax) {
  const auto all = config.all_facts();
  const Timestamp now = config.global_time();
  std::vector<Timestamp> stamps;
  for (const auto& f : all) {
    if (f.time > now && f.time - now > dmax)
      throw AbstractionError("fact " + render(f) + " lies beyond Dmax=" + std::to_string(dmax) + " in the future");
    stamps.push_back(f.time);
  }
  std::sort(stamps.begin(), stamps.end());
  stamps.erase(std::unique(stamps.begin(), stamps.end()), stamps.end());

  std::vector<Entry> entries;
  std::set<std::uint64_t> nonces;
  for (const auto& f : all) {
    const auto g = static_cast<std::size_t>(std::lower_bound(stamps.begin(), stamps.end(), f.time) - stamps.begin());
    entries.push_back({g, f.fact});
    for (const auto& a : f.fact.args) collect_nonces(a, nonces);
  }

  Abstraction out;
  if (!nonces.empty()) out.nonce_map = canonical_renaming(entries, nonces);
  const auto arranged = arrange(entries, out.nonce_map);

  std::vector<Fact> facts;
  std::vector<std::uint64_t> gaps;
  for (std::size_t i = 0; i < arranged.size(); ++i) {
    if (i) {
      const Timestamp diff = stamps[arranged[i].group] - stamps[arranged[i - 1].group];
      gaps.push_back(diff > dmax ? kInfiniteGap : diff);
    }
    facts.push_back(arranged[i].fact);
  }
  Timestamp rep = 0;
  for (std::size_t g = 0; g < stamps.size(); ++g) {
    if (g) {
      const Timestamp diff = stamps[g] - stamps[g - 1];
      rep += diff > dmax ? dmax + 1 : diff;
    }
    out.time_map[stamps[g]] = rep;
  }
  out.rep = DeltaRep(std::move(facts), std::move(gaps), dmax);
  return out;
}

DeltaRep abstract(const Configuration& config, std::uint64_t dmax) { return abstract_with_map(config, dmax).rep; }

Substitution Abstraction::translate(const Substitution& sigma) const {
  Substitution out;
  for (const auto& [k, v] : sigma.terms) out.terms.emplace(k, nonce_map.empty() ? v : rename(v, nonce_map));
  for (const auto& [k, v] : sigma.times) {
    auto it = time_map.find(v);
    if (it == time_map.end()) throw Error("time " + std::to_string(v) + " is not a timestamp of the configuration");
    out.times.emplace(k, it->second);
  }
  return out;
}

bool equivalent(const DeltaRep& a, const DeltaRep& b) {
  if (a.dmax() != b.dmax()) throw Error("comparing delta representations built with different Dmax");
  return a == b;
}

Configuration materialize(const DeltaRep& d) {
  std::vector<TimedFact> facts;
  Timestamp t = 0, now = 0;
  for (std::size_t i = 0; i < d.facts().size(); ++i) {
    if (i) {
      const auto g = d.gaps()[i - 1];
      t = checked_add(t, g == kInfiniteGap ? d.dmax() + 1 : g);
    }
    if (i == d.time_index()) now = t;
    else facts.push_back({d.facts()[i], t});
  }
  return Configuration(now, std::move(facts));
}

DeltaRep delta_step(const DeltaRep& d, const Rule& rule, const Substitution& sigma, const Signature* sig) {
  const Configuration rep = materialize(d);
  CounterNonces nonces(next_free_nonce(rep));
  return abstract(apply_rule(rep, rule, sigma, nonces, sig), d.dmax());
}

DeltaRep delta_tick(const DeltaRep& d) { return abstract(tick(materialize(d)), d.dmax()); }

std::vector<DeltaChoice> delta_enabled(const DeltaRep& d, const SpecModel& spec) {
  std::vector<DeltaChoice> out;
  for (auto& c : enabled_steps(materialize(d), spec))
    out.push_back({c.rule_index, std::move(c.sigma), abstract(c.result, d.dmax())});
  return out;
}

bool delta_must_tick(const DeltaRep& d, const SpecModel& spec) { return must_tick(materialize(d), spec); }

bool delta_critical(const DeltaRep& d, const CriticalSpec& cs) { return is_critical(materialize(d), cs); }

BigNat count_bound(const SpecStats& s) {
  using boost::multiprecision::pow;
  if (s.m == 0) return 0;
  const BigNat mk = BigNat(s.m) * s.k;
  const auto m = static_cast<unsigned>(s.m);
  return pow(BigNat(s.dmax) + 2, m - 1) * pow(BigNat(s.J), m) * pow(BigNat(s.E) + 2 * mk, mk.convert_to<unsigned>());
}

std::pair<std::size_t, bool> DeltaStore::intern(const DeltaRep& d) {
  std::lock_guard lock(mu_);
  auto [lo, hi] = index_.equal_range(d.fingerprint());
  for (auto it = lo; it != hi; ++it)
    if (reps_[it->second] == d) return {it->second, false};
  const std::size_t id = reps_.size();
  reps_.push_back(d);
  index_.emplace(d.fingerprint(), id);
  return {id, true};
}

const DeltaRep& DeltaStore::at(std::size_t id) const {
  std::lock_guard lock(mu_);
  return reps_.at(id);
}

std::size_t DeltaStore::size() const {
  std::lock_guard lock(mu_);
  return reps_.size();
}

}  // namespace tickforge
