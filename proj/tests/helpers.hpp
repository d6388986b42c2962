#pragma once

#include <string_view>
#include <vector>

#include <gtest/gtest.h>

#include "feeloc/error.hpp"
#include "feeloc/fee.hpp"
#include "feeloc/game.hpp"
#include "feeloc/rational.hpp"

namespace testing_util {

inline feeloc::Rational R(std::string_view s) { return feeloc::parse_rational(s); }
inline feeloc::ExtRational E(std::string_view s) { return feeloc::parse_ext(s); }

inline std::vector<feeloc::Rational> Rs(std::initializer_list<std::string_view> xs) {
  std::vector<feeloc::Rational> out;
  for (auto x : xs) out.push_back(R(x));
  return out;
}

inline feeloc::AgentProfile P(std::initializer_list<std::string_view> xs) {
  const auto v = Rs(xs);
  return feeloc::AgentProfile(v);
}

// default 4, override 3 -> 1
inline feeloc::EntranceFee discount_fee(std::string_view at = "3") {
  return feeloc::make_fee(4, {}, {{R(at), feeloc::ExtRational(1)}});
}

// 0 at -1 and 1, +inf elsewhere
inline feeloc::EntranceFee two_hole_fee() {
  return feeloc::make_fee(feeloc::ExtRational::infinity(), {},
                          {{R("-1"), feeloc::ExtRational(0)},
                           {R("1"), feeloc::ExtRational(0)}});
}

}  // namespace testing_util

#define EXPECT_ERROR_KIND(stmt, k)                                   \
  do {                                                               \
    try {                                                            \
      stmt;                                                          \
      ADD_FAILURE() << "no exception from " #stmt;                   \
    } catch (const feeloc::Error& e_) {                              \
      EXPECT_EQ(e_.kind(), feeloc::ErrorKind::k) << e_.what();       \
    }                                                                \
  } while (0)
