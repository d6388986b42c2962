#include <algorithm>

#include <gtest/gtest.h>

#include "feeloc/audit.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace feeloc;
using testing_util::discount_fee;
using testing_util::P;
using testing_util::R;
using testing_util::Rs;
using testing_util::two_hole_fee;

TEST(Profile, SortsAndKeepsPermutation) {
  const auto p = P({"3", "0"});
  EXPECT_EQ(p.positions(), Rs({"0", "3"}));
  EXPECT_EQ(p.perm(), (std::vector<size_t>{1, 0}));
  EXPECT_EQ(p.reported(), Rs({"3", "0"}));
  EXPECT_EQ(P({"1", "1", "1"}).positions(), Rs({"1", "1", "1"}));
  EXPECT_EQ(P({"0"}).size(), 1u);
  EXPECT_ERROR_KIND(AgentProfile(std::vector<Rational>{}), kEmptyProfile);
}

TEST(AgentCost, EqualCostEqualFeePicksRightmost) {
  const auto c = agent_cost(EntranceFee::constant(3), R("0"), Placement{Rs({"-1", "1"})});
  EXPECT_EQ(c.cost, ExtRational(4));
  EXPECT_EQ(c.facility_index, 1u);
}

TEST(AgentCost, EqualCostPicksSmallerFee) {
  const auto c = agent_cost(discount_fee(), R("0"), Placement{Rs({"0", "3"})});
  EXPECT_EQ(c.cost, ExtRational(4));
  EXPECT_EQ(c.facility_index, 1u);
  EXPECT_EQ(c.fee_paid, ExtRational(1));
  EXPECT_EQ(c.travel, R("3"));
}

TEST(AgentCost, ClassicalDistance) {
  const auto c = agent_cost(EntranceFee::constant(0), R("5"), Placement{Rs({"2"})});
  EXPECT_EQ(c.cost, ExtRational(3));
  EXPECT_EQ(c.facility_index, 0u);
}

TEST(Objectives, Examples) {
  const auto fee = discount_fee();
  const auto p = P({"0", "3"});
  EXPECT_EQ(total_cost(fee, p, Placement{Rs({"3"})}), ExtRational(5));
  EXPECT_EQ(total_cost(fee, p, Placement{Rs({"0"})}), ExtRational(11));
  EXPECT_EQ(max_cost(fee, p, Placement{Rs({"0"})}), ExtRational(7));
  EXPECT_EQ(max_cost(EntranceFee::constant(0), P({"0", "2"}), Placement{Rs({"1"})}),
            ExtRational(1));
  EXPECT_ERROR_KIND(total_cost(two_hole_fee(), p, Placement{Rs({"0"})}), kInfeasible);
}

TEST(Lottery, Expectations) {
  const auto fee = discount_fee();
  const auto p = P({"0", "3"});
  EXPECT_EQ(expected_total_cost(fee, p, Lottery::certain(Placement{Rs({"3"})})),
            total_cost(fee, p, Placement{Rs({"3"})}));

  // Randomized total-cost lower-bound profile with eps = 1/100.
  const auto hole = two_hole_fee();
  const auto x2 = P({"-1/100", "1"});
  Lottery half{{{Placement{Rs({"-1"})}, R("1/2")}, {Placement{Rs({"1"})}, R("1/2")}}};
  half.validate();
  EXPECT_EQ(expected_total_cost(hole, x2, half), ExtRational(2));

  Lottery same{{{Placement{Rs({"3"})}, R("1/3")}, {Placement{Rs({"3"})}, R("2/3")}}};
  EXPECT_EQ(expected_total_cost(fee, p, same), ExtRational(5));
  EXPECT_EQ(expected_max_cost(fee, p, same), ExtRational(4));
}

TEST(Lottery, Validation) {
  Lottery bad{{{Placement{Rs({"0"})}, R("1/2")}}};
  EXPECT_ERROR_KIND(bad.validate(), kInvalidLottery);
  Lottery mixed{{{Placement{Rs({"0"})}, R("1/2")}, {Placement{Rs({"0", "1"})}, R("1/2")}}};
  EXPECT_ERROR_KIND(mixed.validate(), kInvalidLottery);
  Lottery neg{{{Placement{Rs({"0"})}, R("3/2")}, {Placement{Rs({"1"})}, R("-1/2")}}};
  EXPECT_ERROR_KIND(neg.validate(), kInvalidLottery);
}

TEST(OptimalLocation, Examples) {
  auto o = optimal_location(EntranceFee::constant(2), R("5"));
  EXPECT_EQ(o.x_star, R("5"));
  EXPECT_EQ(o.optimal_cost, ExtRational(2));
  o = optimal_location(discount_fee(), R("0"));
  EXPECT_EQ(o.x_star, R("3"));
  EXPECT_EQ(o.optimal_cost, ExtRational(4));
  o = optimal_location(two_hole_fee(), R("3/10"));
  EXPECT_EQ(o.x_star, R("1"));
  EXPECT_EQ(o.optimal_cost, ExtRational(R("7/10")));
}

TEST(Dominates, Examples) {
  const auto fee = discount_fee();
  EXPECT_TRUE(dominates(fee, P({"0", "3"}), R("3"), R("1")));
  EXPECT_TRUE(dominates(fee, P({"0", "3"}), R("2"), R("2")));
  EXPECT_FALSE(dominates(EntranceFee::constant(0), P({"0", "10"}), R("0"), R("10")));
}

namespace {

std::vector<Rational> scan_grid() { return oracle::grid(-25, 25, 8); }

}  // namespace

TEST(OptimalLocation, AgreesWithGridScan) {
  RandomParams params;
  const auto pts = scan_grid();
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto inst = random_instance(seed, params);
    const auto raw = oracle::raw(inst.fee);
    for (const auto& x : inst.profile.positions()) {
      const auto want = oracle::x_star(raw, x, pts);
      const auto got = optimal_location(inst.fee, x);
      ASSERT_EQ(got.optimal_cost, want.value) << inst.id;
      ASSERT_EQ(got.x_star, want.location) << inst.id;
    }
  }
}

TEST(AgentCost, MatchesDirectEnumerationAndIgnoresOrder) {
  RandomParams params;
  params.n = 5;
  params.random_n = false;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto inst = random_instance(seed, params);
    const auto raw = oracle::raw(inst.fee);
    auto locs = inst.profile.positions();
    const Rational x = locs[seed % locs.size()] + R("1/8");
    const auto ref = agent_cost(inst.fee, x, Placement{locs});
    ASSERT_EQ(ref.cost, oracle::agent_cost(raw, x, locs));
    std::sort(locs.begin(), locs.end());
    do {
      const auto c = agent_cost(inst.fee, x, Placement{locs});
      ASSERT_EQ(c.cost, ref.cost);
      if (ref.cost.is_finite()) {
        ASSERT_EQ(locs[c.facility_index], inst.profile.positions()[ref.facility_index]);
        ASSERT_EQ(c.fee_paid, ref.fee_paid);
      }
    } while (std::next_permutation(locs.begin(), locs.end()));
  }
}

TEST(Structure, MonotoneOptimalLocations) {
  RandomParams params;
  params.n = 2;
  params.random_n = false;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const auto inst = random_instance(seed, params);
    const auto& x = inst.profile.positions();
    const auto a = optimal_location(inst.fee, x[0]);
    const auto b = optimal_location(inst.fee, x[1]);
    ASSERT_LE(a.x_star, b.x_star) << inst.id;
  }
}

TEST(Structure, IntervalsDisjointOrSameOptimum) {
  RandomParams params;
  params.n = 2;
  params.random_n = false;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const auto inst = random_instance(seed, params);
    const auto& x = inst.profile.positions();
    const auto a = optimal_location(inst.fee, x[0]);
    const auto b = optimal_location(inst.fee, x[1]);
    // Open intervals between each agent and its optimum.
    const Rational alo = std::min(x[0], a.x_star), ahi = std::max(x[0], a.x_star);
    const Rational blo = std::min(x[1], b.x_star), bhi = std::max(x[1], b.x_star);
    const bool disjoint = ahi <= blo || bhi <= alo || alo == ahi || blo == bhi;
    ASSERT_TRUE(disjoint || a.x_star == b.x_star) << inst.id;
  }
}

TEST(Structure, TripleChain) {
  RandomParams params;
  params.n = 3;
  params.random_n = false;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const auto inst = random_instance(seed, params);
    const auto& x = inst.profile.positions();
    std::vector<Rational> star;
    for (const auto& xi : x) star.push_back(optimal_location(inst.fee, xi).x_star);
    const auto c1 = single_cost(inst.fee, x[0], star[0]);
    const auto c2 = single_cost(inst.fee, x[0], star[1]);
    const auto c3 = single_cost(inst.fee, x[0], star[2]);
    ASSERT_LE(c1, c2) << inst.id;
    ASSERT_LE(c2, c3) << inst.id;
  }
}

TEST(Structure, OptimumDominatesClosedInterval) {
  RandomParams params;
  params.n = 6;
  params.random_n = false;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto inst = random_instance(seed, params);
    const Rational x = inst.profile[0];
    const auto o = optimal_location(inst.fee, x);
    const Rational lo = std::min(x, o.x_star), hi = std::max(x, o.x_star);
    for (int k = 0; k <= 20; ++k) {
      const Rational l = lo + (hi - lo) * Rational(k, 20);
      if (inst.fee(l).is_infinite()) continue;
      ASSERT_TRUE(dominates(inst.fee, inst.profile, o.x_star, l)) << inst.id << " l=" << l;
    }
  }
}
