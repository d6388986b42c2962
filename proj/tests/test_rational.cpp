#include <stdexcept>

#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace feeloc;
using testing_util::E;
using testing_util::R;

TEST(Rational, ParsesIntegersDecimalsAndFractions) {
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("-3.01"), make_rational(-301, 100));
  EXPECT_EQ(parse_rational("1/100"), make_rational(1, 100));
  EXPECT_EQ(parse_rational("+2/4"), make_rational(1, 2));
  EXPECT_EQ(parse_rational(".5"), make_rational(1, 2));
}

TEST(Rational, RejectsMalformedInput) {
  EXPECT_ERROR_KIND(parse_rational(""), kParse);
  EXPECT_ERROR_KIND(parse_rational("1/0"), kParse);
  EXPECT_ERROR_KIND(parse_rational("abc"), kParse);
  EXPECT_ERROR_KIND(parse_rational("1.2.3"), kParse);
  EXPECT_ERROR_KIND(parse_rational("inf"), kParse);
}

TEST(Rational, CanonicalStrings) {
  EXPECT_EQ(to_string(R("6/4")), "3/2");
  EXPECT_EQ(to_string(R("-4/2")), "-2");
  EXPECT_EQ(to_string(R("0")), "0");
}

TEST(Rational, DecimalRounding) {
  EXPECT_EQ(to_decimal(R("1101/501")), "2.197605");
  EXPECT_EQ(to_decimal(R("1/2"), 0), "1");
  EXPECT_EQ(to_decimal(R("-1/2"), 0), "-1");
  EXPECT_EQ(to_decimal(R("2"), 2), "2.00");
}

TEST(ExtRational, InfinityAbsorbsAdditionAndDominates) {
  const ExtRational inf = ExtRational::infinity();
  EXPECT_TRUE((inf + ExtRational(3)).is_infinite());
  EXPECT_GT(inf, ExtRational(1000000));
  EXPECT_EQ(inf, E("inf"));
  EXPECT_EQ(min(inf, ExtRational(2)), ExtRational(2));
  EXPECT_EQ(max(inf, ExtRational(2)), inf);
}

TEST(ExtRational, ZeroTimesInfinityIsZero) {
  EXPECT_TRUE((Rational(0) * ExtRational::infinity()).is_zero());
  EXPECT_TRUE((R("1/2") * ExtRational::infinity()).is_infinite());
}

TEST(ExtRational, DivisionRules) {
  EXPECT_EQ(ExtRational(3) / ExtRational(6), ExtRational(R("1/2")));
  EXPECT_TRUE((ExtRational::infinity() / ExtRational(2)).is_infinite());
  EXPECT_THROW((void)(ExtRational(1) / ExtRational::infinity()), std::domain_error);
  EXPECT_THROW((void)ExtRational::infinity().finite(), std::domain_error);
}

TEST(ExtRational, Strings) {
  EXPECT_EQ(to_string(ExtRational::infinity()), "inf");
  EXPECT_EQ(to_string(E("+inf")), "inf");
  EXPECT_EQ(to_string(E("0.25")), "1/4");
  EXPECT_EQ(to_decimal(ExtRational::infinity()), "inf");
}
