#include <gtest/gtest.h>

#include "feeloc/families.hpp"
#include "feeloc/mechanisms.hpp"
#include "feeloc/solvers.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace feeloc;
using testing_util::P;
using testing_util::R;
using testing_util::Rs;

TEST(Families, NamesRoundTrip) {
  for (auto id : all_families()) EXPECT_EQ(parse_family(family_name(id)), id);
  EXPECT_ERROR_KIND(parse_family("NOPE"), kBadParams);
}

TEST(Families, ParamParsing) {
  const auto p = parse_params("d=1,eps=1/100");
  EXPECT_EQ(p.at("d"), "1");
  EXPECT_EQ(p.at("eps"), "1/100");
  EXPECT_TRUE(parse_params("").empty());
  EXPECT_ERROR_KIND(parse_params("d"), kParse);
  EXPECT_ERROR_KIND(gen_instance(FamilyId::kTcLbDet, {{"bogus", "1"}}), kBadParams);
  EXPECT_ERROR_KIND(gen_instance(FamilyId::kTcLbDet, {{"eps", "1"}}), kBadParams);
  EXPECT_ERROR_KIND(gen_instance(FamilyId::kMcTightM1, {{"e_max", "2"}}), kBadParams);
  EXPECT_ERROR_KIND(gen_instance(FamilyId::kTcTightMed, {{"L", "2"}}), kBadParams);
}

TEST(Families, DeterministicTotalCostProfiles) {
  const auto f = gen_instance(FamilyId::kTcLbDet, parse_params("d=1,eps=1/100"));
  EXPECT_EQ(f.fee(R("-1")), ExtRational(1));
  EXPECT_EQ(f.fee(R("1")), ExtRational(1));
  EXPECT_EQ(f.fee(R("0")), ExtRational(2));
  ASSERT_EQ(f.profiles.size(), 3u);
  EXPECT_EQ(f.profiles[0], Rs({"-1", "1/100"}));
  EXPECT_EQ(f.profiles[1], Rs({"-1/100", "1"}));
  EXPECT_EQ(f.profiles[2], Rs({"-1", "1"}));
  EXPECT_TRUE(f.lower_bound);
  EXPECT_EQ(f.params, "d=1,eps=1/100");
}

TEST(Families, TightMedianFee) {
  const auto f = gen_instance(FamilyId::kTcTightMed,
                              parse_params("e_min=1,e_max=4,L=301/100,n=2"));
  EXPECT_EQ(f.fee.default_fee(), ExtRational(4));
  EXPECT_EQ(f.fee(R("301/100")), ExtRational(1));
  ASSERT_EQ(f.profiles.size(), 1u);
  EXPECT_EQ(f.profiles[0], Rs({"0", "301/100"}));
  EXPECT_EQ(f.bound, ExtRational(R("11/5")));
}

TEST(Families, McLb2Fee) {
  const auto f = gen_instance(FamilyId::kMcLb2, parse_params("alpha=3"));
  EXPECT_EQ(f.fee(R("-2")), ExtRational(1));
  EXPECT_EQ(f.fee(R("0")), ExtRational(3));
  EXPECT_EQ(f.fee(R("100")), ExtRational(3));
  EXPECT_TRUE(f.adaptive_tail);
  EXPECT_EQ(f.objective, Objective::kMaxCost);
}

TEST(Families, McLb3CaseTable) {
  const auto f = gen_instance(FamilyId::kMcLb3, parse_params("d=1,eps=1/100"));
  EXPECT_EQ(f.fee(R("1")), ExtRational(3));
  EXPECT_EQ(f.fee(R("-1")), ExtRational(3));
  EXPECT_EQ(f.fee(R("0")), ExtRational(5));
  const AgentProfile x1(f.profiles[0]);
  EXPECT_EQ(max_cost(f.fee, x1, Placement{Rs({"-1"})}), ExtRational(6));
  EXPECT_EQ(max_cost(f.fee, x1, Placement{Rs({"1"})}), ExtRational(R("401/100")));
}

TEST(Families, TwoFacilityTotalCost) {
  const auto f = gen_instance(FamilyId::kTwoFacTc, {});
  ASSERT_EQ(f.profiles.size(), 1u);
  EXPECT_EQ(f.profiles[0], Rs({"0", "5000", "5000", "5000", "10000"}));
  EXPECT_EQ(f.facilities, 2u);
  const AgentProfile p(f.profiles[0]);
  EXPECT_EQ(approx_ratio(Mechanism::opt_of_extremes(), f.fee, p, Objective::kTotalCost),
            ExtRational(R("15010/5006")));
}

TEST(Families, TwoFacilityLowerBoundAnchor) {
  const auto f = gen_instance(FamilyId::kTwoFacLb, {});
  EXPECT_EQ(f.facilities, 2u);
  const auto base = gen_instance(FamilyId::kMcLb3, {});
  ASSERT_EQ(f.profiles.size(), base.profiles.size());
  for (size_t k = 0; k < f.profiles.size(); ++k) {
    EXPECT_EQ(f.profiles[k].size(), base.profiles[k].size() + 1);
    EXPECT_LT(f.profiles[k].front(), R("-1000000"));
  }
}

TEST(Families, AllDefaultsGenerateValidProfiles) {
  for (auto id : all_families()) {
    const auto f = gen_instance(id, {});
    ASSERT_FALSE(f.profiles.empty()) << family_name(id);
    ASSERT_EQ(f.profiles.size(), f.profile_ids.size());
    for (const auto& prof : f.profiles) EXPECT_NO_THROW(AgentProfile{prof});
    EXPECT_GE(f.tolerance, Rational(0));
  }
}

TEST(LowerBoundAudit, MedianOnDeterministicFamily) {
  const auto f = gen_instance(FamilyId::kTcLbDet, {});
  const auto r = audit_lower_bound(Mechanism::opt_of_median(), f);
  EXPECT_EQ(r.worst_ratio, ExtRational(R("499/301")));
  EXPECT_EQ(r.worst_instance, "x2");
  EXPECT_TRUE(r.ratio_witness);
  EXPECT_TRUE(r.certified());
  ASSERT_TRUE(r.tolerance.has_value());
  EXPECT_EQ(*r.tolerance, R("8/903"));
}

TEST(LowerBoundAudit, OptimumViolatesStrategyproofness) {
  const auto f = gen_instance(FamilyId::kTcLbDet, {});
  const auto r = audit_lower_bound(Mechanism::optimal(Objective::kTotalCost), f);
  EXPECT_EQ(r.worst_ratio, ExtRational(1));
  EXPECT_FALSE(r.ratio_witness);
  EXPECT_TRUE(r.sp_witness);
  ASSERT_FALSE(r.violations.empty());
  // Every witness moves into the full-width profile and strictly gains.
  for (const auto& v : r.violations) {
    ASSERT_EQ(v.coalition.size(), 1u);
    EXPECT_LT(v.cost_after[0], v.cost_before[0]);
  }
}

TEST(LowerBoundAudit, TwoPointOnRandomizedFamily) {
  const auto f = gen_instance(FamilyId::kTcLbRand, {});
  const auto r = audit_lower_bound(Mechanism::two_point(), f);
  EXPECT_EQ(r.worst_ratio, ExtRational(R("200/101")));
  EXPECT_TRUE(r.ratio_witness);
}

TEST(LowerBoundAudit, FirstAgentOnMaxCostFamilies) {
  for (auto id : {FamilyId::kMcLb2, FamilyId::kMcLb3, FamilyId::kMcLbRand}) {
    const auto f = gen_instance(id, {});
    const auto r = audit_lower_bound(Mechanism::opt_of_agent(1), f);
    EXPECT_TRUE(r.certified()) << family_name(id);
  }
  const auto r = audit_lower_bound(Mechanism::optimal(Objective::kMaxCost),
                                   gen_instance(FamilyId::kMcLb3, {}));
  EXPECT_TRUE(r.certified());
}

TEST(LowerBoundAudit, TwoFacilityFamilies) {
  for (auto base : {"MC_LB_3", "MC_LB_2", "MC_LB_RAND"}) {
    const auto f = gen_instance(FamilyId::kTwoFacLb, {{"base", base}});
    EXPECT_TRUE(audit_lower_bound(Mechanism::opt_of_extremes(), f).certified()) << base;
    EXPECT_TRUE(audit_lower_bound(Mechanism::optimal(Objective::kMaxCost, 2), f).certified())
        << base;
  }
}

TEST(LowerBoundAudit, RejectsMismatches) {
  EXPECT_ERROR_KIND(audit_lower_bound(Mechanism::opt_of_median(),
                                      gen_instance(FamilyId::kTcTightMed, {})),
                    kBadParams);
  EXPECT_ERROR_KIND(audit_lower_bound(Mechanism::opt_of_extremes(),
                                      gen_instance(FamilyId::kTcLbDet, {})),
                    kBadParams);
}

// Closed forms of the family arithmetic, evaluated without the library fee.
TEST(Families, ArithmeticAgainstClosedForms) {
  for (long dn : {0L, 1L, 3L}) {
    const Rational d(dn), eps = R("1/100");
    auto det = [&](const Rational& l) {
      return (l == 1 || l == -1) ? ExtRational(d) : ExtRational(Rational(d + 1));
    };
    const auto f = gen_instance(FamilyId::kTcLbDet,
                                {{"d", std::to_string(dn)}, {"eps", "1/100"}});
    const auto& x1 = f.profiles[0];
    const auto tc_m1 = oracle::objective(det, x1, {R("-1")}, Objective::kTotalCost);
    const auto tc_p1 = oracle::objective(det, x1, {R("1")}, Objective::kTotalCost);
    EXPECT_EQ(tc_m1, ExtRational(Rational(2 * d + 1 + eps)));
    EXPECT_EQ(tc_p1, ExtRational(Rational(2 * d + 3 - eps)));
    EXPECT_EQ(total_cost(f.fee, AgentProfile(x1), Placement{Rs({"-1"})}), tc_m1);
    EXPECT_EQ(total_cost(f.fee, AgentProfile(x1), Placement{Rs({"1"})}), tc_p1);
  }
}
