#include "feeloc/game.hpp"

#include <algorithm>
#include <numeric>

#include "feeloc/error.hpp"

namespace feeloc {

AgentProfile::AgentProfile(std::span<const Rational> reported) {
  if (reported.empty()) {
    throw Error(ErrorKind::kEmptyProfile, "profile needs at least one agent");
  }
  perm_.resize(reported.size());
  std::iota(perm_.begin(), perm_.end(), size_t{0});
  std::stable_sort(perm_.begin(), perm_.end(), [&](size_t a, size_t b) {
    return reported[a] < reported[b];
  });
  positions_.reserve(reported.size());
  for (size_t k : perm_) positions_.push_back(reported[k]);
}

std::vector<Rational> AgentProfile::reported() const {
  std::vector<Rational> out(positions_.size());
  for (size_t k = 0; k < perm_.size(); ++k) out[perm_[k]] = positions_[k];
  return out;
}

AgentProfile AgentProfile::slice(size_t first, size_t last) const {
  if (first > last || last >= positions_.size()) {
    throw Error(ErrorKind::kBadRange, "bad agent range");
  }
  return AgentProfile(std::span<const Rational>(positions_).subspan(
      first, last - first + 1));
}

bool is_feasible(const EntranceFee& fee, const Placement& placement) {
  return std::any_of(placement.locations.begin(), placement.locations.end(),
                     [&](const Rational& l) { return fee(l).is_finite(); });
}

void Lottery::validate() const {
  if (support.empty()) {
    throw Error(ErrorKind::kInvalidLottery, "lottery has empty support");
  }
  Rational total;
  for (const auto& [placement, p] : support) {
    if (sgn(p) < 0) {
      throw Error(ErrorKind::kInvalidLottery, "negative probability");
    }
    if (placement.size() == 0 || placement.size() != facilities()) {
      throw Error(ErrorKind::kInvalidLottery,
                  "lottery placements differ in facility count");
    }
    total += p;
  }
  if (total != 1) {
    throw Error(ErrorKind::kInvalidLottery,
                "probabilities sum to " + to_string(total));
  }
}

ExtRational single_cost(const EntranceFee& fee, const Rational& x,
                        const Rational& l) {
  return ExtRational(abs(Rational(x - l))) + fee(l);
}

AgentChoice agent_cost(const EntranceFee& fee, const Rational& x,
                       const Placement& placement) {
  AgentChoice best;
  bool have = false;
  for (size_t j = 0; j < placement.size(); ++j) {
    const Rational& l = placement.locations[j];
    ExtRational f = fee(l);
    Rational travel = abs(Rational(x - l));
    ExtRational c = ExtRational(travel) + f;
    bool better = !have || c < best.cost;
    if (!better && c == best.cost) {
      better = f < best.fee_paid ||
               (f == best.fee_paid && l > placement.locations[best.facility_index]);
    }
    if (better) {
      best = {std::move(c), j, std::move(f), std::move(travel)};
      have = true;
    }
  }
  return best;
}

namespace {

void require_feasible(const EntranceFee& fee, const Placement& placement) {
  if (!is_feasible(fee, placement)) {
    throw Error(ErrorKind::kInfeasible, "every facility has fee +inf");
  }
}

}  // namespace

ExtRational total_cost(const EntranceFee& fee, const AgentProfile& profile,
                       const Placement& placement) {
  require_feasible(fee, placement);
  ExtRational sum;
  for (const auto& x : profile.positions()) {
    sum += agent_cost(fee, x, placement).cost;
  }
  return sum;
}

ExtRational max_cost(const EntranceFee& fee, const AgentProfile& profile,
                     const Placement& placement) {
  require_feasible(fee, placement);
  ExtRational worst;
  for (const auto& x : profile.positions()) {
    worst = max(worst, agent_cost(fee, x, placement).cost);
  }
  return worst;
}

ExtRational objective_value(const EntranceFee& fee, const AgentProfile& profile,
                            const Placement& placement, Objective objective) {
  return objective == Objective::kTotalCost
             ? total_cost(fee, profile, placement)
             : max_cost(fee, profile, placement);
}

ExtRational expected_agent_cost(const EntranceFee& fee, const Rational& x,
                                const Lottery& lottery) {
  ExtRational sum;
  for (const auto& [placement, p] : lottery.support) {
    sum += p * agent_cost(fee, x, placement).cost;
  }
  return sum;
}

ExtRational expected_objective(const EntranceFee& fee,
                               const AgentProfile& profile,
                               const Lottery& lottery, Objective objective) {
  lottery.validate();
  ExtRational sum;
  for (const auto& [placement, p] : lottery.support) {
    if (sgn(p) == 0) continue;
    sum += p * objective_value(fee, profile, placement, objective);
  }
  return sum;
}

ExtRational expected_total_cost(const EntranceFee& fee,
                                const AgentProfile& profile,
                                const Lottery& lottery) {
  return expected_objective(fee, profile, lottery, Objective::kTotalCost);
}

ExtRational expected_max_cost(const EntranceFee& fee,
                              const AgentProfile& profile,
                              const Lottery& lottery) {
  return expected_objective(fee, profile, lottery, Objective::kMaxCost);
}

OptimalLocation optimal_location(const EntranceFee& fee, const Rational& x) {
  const ExtRational own = fee(x);
  const auto& sp = fee.special_points();
  auto first = sp.begin();
  auto last = sp.end();
  if (own.is_finite()) {
    // Anything farther than e(x) costs more than building at x itself.
    first = std::lower_bound(sp.begin(), sp.end(), Rational(x - own.finite()));
    last = std::upper_bound(first, sp.end(), Rational(x + own.finite()));
  }

  OptimalLocation best{x, ExtRational::infinity()};
  ExtRational best_fee = ExtRational::infinity();
  auto consider = [&](const Rational& l) {
    ExtRational f = fee(l);
    if (f.is_infinite()) return;
    ExtRational c = ExtRational(abs(Rational(x - l))) + f;
    if (c < best.optimal_cost ||
        (c == best.optimal_cost &&
         (f < best_fee || (f == best_fee && l > best.x_star)))) {
      best = {l, std::move(c)};
      best_fee = std::move(f);
    }
  };
  consider(x);
  for (auto it = first; it != last; ++it) consider(*it);
  if (best.optimal_cost.is_infinite()) {
    throw Error(ErrorKind::kInfeasible,
                "no finite-fee location for agent at " + to_string(x));
  }
  return best;
}

bool dominates(const EntranceFee& fee, const AgentProfile& profile,
               const Rational& l1, const Rational& l2) {
  return std::all_of(profile.positions().begin(), profile.positions().end(),
                     [&](const Rational& x) {
                       return single_cost(fee, x, l1) <= single_cost(fee, x, l2);
                     });
}

}  // namespace feeloc
