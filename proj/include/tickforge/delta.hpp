#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "tickforge/core.hpp"
#include "tickforge/engine.hpp"
#include "tickforge/syntax.hpp"

namespace tickforge {

class AbstractionError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint64_t kInfiniteGap = std::numeric_limits<std::uint64_t>::max();

// Untimed facts in time order with the truncated gaps between neighbours.
// facts().size() == gaps().size() + 1; the Time fact is one of the entries.
class DeltaRep {
 public:
  DeltaRep() = default;
  DeltaRep(std::vector<Fact> facts, std::vector<std::uint64_t> gaps, std::uint64_t dmax);

  const std::vector<Fact>& facts() const { return facts_; }
  const std::vector<std::uint64_t>& gaps() const { return gaps_; }
  std::uint64_t dmax() const { return dmax_; }
  std::size_t time_index() const { return time_index_; }
  std::uint64_t fingerprint() const { return hash_; }

  // [Q1 |d| Q2 |inf| Q3]
  std::string render() const;

  bool operator==(const DeltaRep& o) const {
    return hash_ == o.hash_ && dmax_ == o.dmax_ && gaps_ == o.gaps_ && facts_ == o.facts_;
  }

 private:
  std::vector<Fact> facts_;
  std::vector<std::uint64_t> gaps_;
  std::uint64_t dmax_ = 0;
  std::size_t time_index_ = 0;
  std::uint64_t hash_ = 0;
};

// abstract() together with how the concrete configuration maps onto
// materialize(rep): timestamps by tie group and nonces by canonical index.
struct Abstraction {
  DeltaRep rep;
  std::map<Timestamp, Timestamp> time_map;
  std::map<std::uint64_t, std::uint64_t> nonce_map;

  // Carries a substitution valid on the concrete configuration over to the
  // representative. Fresh bindings are dropped.
  Substitution translate(const Substitution& sigma) const;
};

Abstraction abstract_with_map(const Configuration& config, std::uint64_t dmax);
DeltaRep abstract(const Configuration& config, std::uint64_t dmax);

// Throws Error when the two were built with different Dmax.
bool equivalent(const DeltaRep& a, const DeltaRep& b);

// Canonical representative: first entry at 0, ∞ gaps become Dmax+1.
Configuration materialize(const DeltaRep& d);

// One abstract step through the representative. `sigma` must be valid on
// materialize(d). Throws NotApplicable.
DeltaRep delta_step(const DeltaRep& d, const Rule& rule, const Substitution& sigma, const Signature* sig = nullptr);
DeltaRep delta_tick(const DeltaRep& d);

struct DeltaChoice {
  std::size_t rule_index = 0;
  Substitution sigma;
  DeltaRep result;
};

std::vector<DeltaChoice> delta_enabled(const DeltaRep& d, const SpecModel& spec);
bool delta_must_tick(const DeltaRep& d, const SpecModel& spec);
bool delta_critical(const DeltaRep& d, const CriticalSpec& cs);

using BigNat = boost::multiprecision::cpp_int;

// (Dmax + 2)^(m-1) * J^m * (E + 2mk)^(mk)
BigNat count_bound(const SpecStats& stats);

// Hash-consing table; insert-if-absent is atomic. Ids are dense and stable.
class DeltaStore {
 public:
  // Returns the id and whether the entry was new.
  std::pair<std::size_t, bool> intern(const DeltaRep& d);
  const DeltaRep& at(std::size_t id) const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::deque<DeltaRep> reps_;
  std::unordered_multimap<std::uint64_t, std::size_t> index_;
};

}  // namespace tickforge
