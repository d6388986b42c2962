#pragma once

/**
 * Mechanisms map an entrance fee and a reported profile to facility
 * locations (deterministic) or to a lottery over locations (randomized).
 *
 * Agent indices are 1-based positions in the sorted profile.
 */

#include <functional>
#include <span>
#include <string>
#include <variant>

#include "feeloc/fee.hpp"
#include "feeloc/game.hpp"

namespace feeloc {

using Outcome = std::variant<Placement, Lottery>;

Lottery as_lottery(const Outcome& outcome);

// Facility at x_i* for the i-th sorted agent. Throws Error(kBadIndex).
Placement mech_mi(const EntranceFee& fee, const AgentProfile& profile, size_t i);

// mech_mi with i = ceil(n / 2).
Placement mech_med(const EntranceFee& fee, const AgentProfile& profile);

size_t median_index(size_t n);

// Facilities at x_i* and x_j*, i <= j.
Placement mech_mij(const EntranceFee& fee, const AgentProfile& profile,
                   size_t i, size_t j);

// The point indifferent between lone facilities at `a` and `b`, clamped to
// the segment between them when one location is preferred everywhere.
// Throws Error(kInfeasible) if either fee is +inf.
Rational critical_position(const EntranceFee& fee, const Rational& a,
                           const Rational& b);

struct TwoPointDetails {
  Rational l_tc;
  Rational med_star;
  Rational x_crit;
  size_t k = 0;  // agents on the l_tc side of x_crit, x_crit itself included
};

TwoPointDetails two_point_details(const EntranceFee& fee,
                                  const AgentProfile& profile);

// l_tc with probability k/n and x_med* with probability 1 - k/n. Degenerates
// to a single certain placement when the two coincide.
Lottery mech_trm(const EntranceFee& fee, const AgentProfile& profile);

class Mechanism {
 public:
  enum class Kind { kOptOfAgent, kOptOfMedian, kOptPair, kTwoPoint, kOptimal, kCustom };
  using Fn = std::function<Outcome(const EntranceFee&, const AgentProfile&)>;

  static Mechanism opt_of_agent(size_t i);
  static Mechanism opt_of_median();
  static Mechanism opt_pair(size_t i, size_t j);
  // m_{1,n}; resolved against the profile size at application time.
  static Mechanism opt_of_extremes();
  static Mechanism two_point();
  static Mechanism optimal(Objective objective, size_t facilities = 1);
  static Mechanism custom(std::string label, size_t facilities, Fn fn);

  // Facility at the mean reported position; not strategyproof, used as a
  // control in audits.
  static Mechanism mean();

  Outcome apply(const EntranceFee& fee, const AgentProfile& profile) const;
  Outcome apply(const EntranceFee& fee, std::span<const Rational> reported) const;

  Kind kind() const { return kind_; }
  size_t facilities() const { return facilities_; }
  bool randomized() const { return kind_ == Kind::kTwoPoint; }
  const std::string& label() const { return label_; }

 private:
  Mechanism(Kind kind, std::string label, size_t facilities)
      : kind_(kind), label_(std::move(label)), facilities_(facilities) {}

  Kind kind_;
  std::string label_;
  size_t facilities_;
  size_t i_ = 0;  // 0 in opt_pair's j means "last agent"
  size_t j_ = 0;
  Objective objective_ = Objective::kTotalCost;
  Fn fn_;
};

}  // namespace feeloc
