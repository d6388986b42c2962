#pragma once

#include <span>
#include <utility>
#include <vector>

#include "feeloc/fee.hpp"
#include "feeloc/rational.hpp"

namespace feeloc {

enum class Objective { kTotalCost, kMaxCost };

// Agents sorted ascending. perm()[k] is the reported index of the agent at
// sorted position k; equal positions keep their reported order.
class AgentProfile {
 public:
  // Throws Error(kEmptyProfile).
  explicit AgentProfile(std::span<const Rational> reported);

  size_t size() const { return positions_.size(); }
  const Rational& operator[](size_t k) const { return positions_[k]; }
  const std::vector<Rational>& positions() const { return positions_; }
  const std::vector<size_t>& perm() const { return perm_; }

  // Positions in the order they were reported.
  std::vector<Rational> reported() const;

  // Agents first..last (0-based, inclusive) as their own profile.
  AgentProfile slice(size_t first, size_t last) const;

 private:
  std::vector<Rational> positions_;
  std::vector<size_t> perm_;
};

inline AgentProfile make_profile(std::span<const Rational> reported) {
  return AgentProfile(reported);
}

struct Placement {
  std::vector<Rational> locations;

  size_t size() const { return locations.size(); }
  bool operator==(const Placement&) const = default;
};

// True when at least one facility has a finite fee.
bool is_feasible(const EntranceFee& fee, const Placement& placement);

struct Lottery {
  std::vector<std::pair<Placement, Rational>> support;

  // Probabilities >= 0 summing to exactly 1, one common facility count.
  // Throws Error(kInvalidLottery).
  void validate() const;
  size_t facilities() const { return support.front().first.size(); }

  static Lottery certain(Placement p) { return {{{std::move(p), Rational(1)}}}; }
};

struct AgentChoice {
  ExtRational cost;
  size_t facility_index = 0;
  ExtRational fee_paid;
  Rational travel;
};

// Cheapest facility for an agent at x; ties go to the smaller fee, then to
// the rightmost facility.
AgentChoice agent_cost(const EntranceFee& fee, const Rational& x,
                       const Placement& placement);

// Both throw Error(kInfeasible) when every facility has fee +inf.
ExtRational total_cost(const EntranceFee& fee, const AgentProfile& profile,
                       const Placement& placement);
ExtRational max_cost(const EntranceFee& fee, const AgentProfile& profile,
                     const Placement& placement);
ExtRational objective_value(const EntranceFee& fee, const AgentProfile& profile,
                            const Placement& placement, Objective objective);

// Expectations over a lottery. The max-cost version is E[MC], the expected
// maximum, not the maximum expected cost.
ExtRational expected_agent_cost(const EntranceFee& fee, const Rational& x,
                                 const Lottery& lottery);
ExtRational expected_total_cost(const EntranceFee& fee,
                                const AgentProfile& profile,
                                const Lottery& lottery);
ExtRational expected_max_cost(const EntranceFee& fee,
                              const AgentProfile& profile,
                              const Lottery& lottery);
ExtRational expected_objective(const EntranceFee& fee,
                               const AgentProfile& profile,
                               const Lottery& lottery, Objective objective);

struct OptimalLocation {
  Rational x_star;
  ExtRational optimal_cost;
};

// argmin over l of |x - l| + e(l), searching only within distance e(x) of x
// when e(x) is finite. Throws Error(kInfeasible) if no finite-fee location
// exists.
OptimalLocation optimal_location(const EntranceFee& fee, const Rational& x);

// True iff every agent weakly prefers a lone facility at l1 to one at l2.
bool dominates(const EntranceFee& fee, const AgentProfile& profile,
               const Rational& l1, const Rational& l2);

// Cost of an agent at x for a single facility at l.
ExtRational single_cost(const EntranceFee& fee, const Rational& x,
                        const Rational& l);

}  // namespace feeloc
