#include "feeloc/mechanisms.hpp"

#include "feeloc/error.hpp"
#include "feeloc/solvers.hpp"

namespace feeloc {

Lottery as_lottery(const Outcome& outcome) {
  if (const auto* p = std::get_if<Placement>(&outcome)) return Lottery::certain(*p);
  return std::get<Lottery>(outcome);
}

namespace {

void check_index(size_t i, size_t n) {
  if (i < 1 || i > n) {
    throw Error(ErrorKind::kBadIndex, "agent index " + std::to_string(i) +
                                          " outside 1.." + std::to_string(n));
  }
}

}  // namespace

Placement mech_mi(const EntranceFee& fee, const AgentProfile& profile, size_t i) {
  check_index(i, profile.size());
  return {{optimal_location(fee, profile[i - 1]).x_star}};
}

size_t median_index(size_t n) { return (n + 1) / 2; }

Placement mech_med(const EntranceFee& fee, const AgentProfile& profile) {
  return mech_mi(fee, profile, median_index(profile.size()));
}

Placement mech_mij(const EntranceFee& fee, const AgentProfile& profile,
                   size_t i, size_t j) {
  check_index(i, profile.size());
  check_index(j, profile.size());
  if (i > j) throw Error(ErrorKind::kBadIndex, "m_ij needs i <= j");
  return {{optimal_location(fee, profile[i - 1]).x_star,
           optimal_location(fee, profile[j - 1]).x_star}};
}

Rational critical_position(const EntranceFee& fee, const Rational& a,
                           const Rational& b) {
  if (a == b) return a;
  const Rational& left = a < b ? a : b;
  const Rational& right = a < b ? b : a;
  const ExtRational fl = fee(left);
  const ExtRational fr = fee(right);
  if (fl.is_infinite() || fr.is_infinite()) {
    throw Error(ErrorKind::kInfeasible, "critical position of +inf-fee location");
  }
  // x - left + e(left) = right - x + e(right)
  Rational x = (left + right + fr.finite() - fl.finite()) / 2;
  if (x < left) return left;
  if (x > right) return right;
  return x;
}

TwoPointDetails two_point_details(const EntranceFee& fee,
                                  const AgentProfile& profile) {
  TwoPointDetails d;
  d.med_star = mech_med(fee, profile).locations.front();
  d.l_tc = solve_one_tc(fee, profile).placement.locations.front();
  if (d.med_star == d.l_tc) {
    d.x_crit = d.l_tc;
    d.k = profile.size();
    return d;
  }
  d.x_crit = critical_position(fee, d.med_star, d.l_tc);
  for (const auto& x : profile.positions()) {
    if (d.med_star < d.l_tc ? d.x_crit <= x : x <= d.x_crit) ++d.k;
  }
  return d;
}

Lottery mech_trm(const EntranceFee& fee, const AgentProfile& profile) {
  const TwoPointDetails d = two_point_details(fee, profile);
  if (d.med_star == d.l_tc) return Lottery::certain({{d.l_tc}});
  const Rational q = make_rational(static_cast<long>(d.k),
                                   static_cast<long>(profile.size()));
  return {{{Placement{{d.l_tc}}, q}, {Placement{{d.med_star}}, Rational(1 - q)}}};
}

Mechanism Mechanism::opt_of_agent(size_t i) {
  Mechanism m(Kind::kOptOfAgent, "m" + std::to_string(i), 1);
  m.i_ = i;
  return m;
}

Mechanism Mechanism::opt_of_median() {
  return Mechanism(Kind::kOptOfMedian, "med", 1);
}

Mechanism Mechanism::opt_pair(size_t i, size_t j) {
  Mechanism m(Kind::kOptPair, "m" + std::to_string(i) + "," + std::to_string(j), 2);
  m.i_ = i;
  m.j_ = j;
  return m;
}

Mechanism Mechanism::opt_of_extremes() {
  Mechanism m(Kind::kOptPair, "m1,n", 2);
  m.i_ = 1;
  m.j_ = 0;
  return m;
}

Mechanism Mechanism::two_point() { return Mechanism(Kind::kTwoPoint, "trm", 1); }

Mechanism Mechanism::optimal(Objective objective, size_t facilities) {
  Mechanism m(Kind::kOptimal,
              objective == Objective::kTotalCost ? "opt-tc" : "opt-mc",
              facilities);
  m.objective_ = objective;
  return m;
}

Mechanism Mechanism::custom(std::string label, size_t facilities, Fn fn) {
  Mechanism m(Kind::kCustom, std::move(label), facilities);
  m.fn_ = std::move(fn);
  return m;
}

Mechanism Mechanism::mean() {
  return custom("mean", 1, [](const EntranceFee&, const AgentProfile& profile) {
    Rational sum;
    for (const auto& x : profile.positions()) sum += x;
    return Outcome(Placement{{Rational(sum / static_cast<long>(profile.size()))}});
  });
}

Outcome Mechanism::apply(const EntranceFee& fee,
                         const AgentProfile& profile) const {
  switch (kind_) {
    case Kind::kOptOfAgent:
      return mech_mi(fee, profile, i_);
    case Kind::kOptOfMedian:
      return mech_med(fee, profile);
    case Kind::kOptPair:
      return mech_mij(fee, profile, i_, j_ == 0 ? profile.size() : j_);
    case Kind::kTwoPoint:
      return mech_trm(fee, profile);
    case Kind::kOptimal:
      return solve_multi(fee, profile, facilities_, objective_).placement;
    case Kind::kCustom:
      return fn_(fee, profile);
  }
  throw std::logic_error("unknown mechanism kind");
}

Outcome Mechanism::apply(const EntranceFee& fee,
                         std::span<const Rational> reported) const {
  return apply(fee, AgentProfile(reported));
}

}  // namespace feeloc
