#pragma once

/**
 * Entrance fee functions on the real line.
 *
 * The supported class is piecewise constant with point overrides:
 *
 *   e(x) = override fee          if x is an override position
 *        = fee of the rightmost breakpoint <= x   (left-closed pieces)
 *        = default fee           if x lies left of every breakpoint
 *
 * Construction enforces lower semi-continuity at every breakpoint and
 * override, which is what makes every argmin below attained.
 */

#include <utility>
#include <vector>

#include "feeloc/rational.hpp"

namespace feeloc {

struct FeePoint {
  Rational at;
  ExtRational fee;
};

struct FeeExtrema {
  ExtRational e_min;
  ExtRational e_max;
  ExtRational r_e;  // max-min ratio; 1 when e == 0, +inf when only e_min == 0
};

class EntranceFee {
 public:
  // Validates and throws Error(kNegativeFee | kUnsortedBreakpoints |
  // kDuplicateOverride | kLscViolation | kNoFiniteFee).
  EntranceFee(ExtRational default_fee, std::vector<FeePoint> breakpoints,
              std::vector<FeePoint> overrides);

  static EntranceFee constant(ExtRational fee) {
    return EntranceFee(std::move(fee), {}, {});
  }

  ExtRational operator()(const Rational& x) const { return eval(x); }
  ExtRational eval(const Rational& x) const;

  // Value of the piece containing x, ignoring overrides (= right limit).
  const ExtRational& base(const Rational& x) const;
  // Limit of e(y) as y -> x from the left.
  const ExtRational& left_limit(const Rational& x) const;

  const ExtRational& default_fee() const { return default_fee_; }
  const std::vector<FeePoint>& breakpoints() const { return breakpoints_; }
  // Sorted by position.
  const std::vector<FeePoint>& overrides() const { return overrides_; }

  // Sorted, de-duplicated positions of every breakpoint and override.
  const std::vector<Rational>& special_points() const { return special_; }

  // Same function with `delta` added to every attained value.
  EntranceFee shifted(const Rational& delta) const;

 private:
  const FeePoint* find_override(const Rational& x) const;

  ExtRational default_fee_;
  std::vector<FeePoint> breakpoints_;
  std::vector<FeePoint> overrides_;
  std::vector<Rational> special_;
};

inline EntranceFee make_fee(ExtRational default_fee,
                            std::vector<FeePoint> breakpoints,
                            std::vector<FeePoint> overrides) {
  return EntranceFee(std::move(default_fee), std::move(breakpoints),
                     std::move(overrides));
}

FeeExtrema fee_extrema(const EntranceFee& fee);

struct AffineMin {
  Rational location;
  ExtRational value;
};

// Minimizes a * e(l) + b * l over [lo, hi]. Among minimizers the smallest fee
// wins, then the rightmost location. Infinite-fee locations are worth +inf
// whatever `a` is; if every point of the interval has infinite fee the value
// is +inf. Throws Error(kEmptyInterval) when lo > hi.
AffineMin min_affine(const EntranceFee& fee, long a, long b, const Rational& lo,
                     const Rational& hi);

}  // namespace feeloc
