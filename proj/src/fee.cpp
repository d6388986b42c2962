#include "feeloc/fee.hpp"

#include <algorithm>

#include "feeloc/error.hpp"

namespace feeloc {

namespace {

void require_non_negative(const ExtRational& fee, const char* what) {
  if (fee < ExtRational(0)) {
    throw Error(ErrorKind::kNegativeFee,
                std::string(what) + " fee is negative: " + to_string(fee));
  }
}

}  // namespace

EntranceFee::EntranceFee(ExtRational default_fee,
                         std::vector<FeePoint> breakpoints,
                         std::vector<FeePoint> overrides)
    : default_fee_(std::move(default_fee)),
      breakpoints_(std::move(breakpoints)),
      overrides_(std::move(overrides)) {
  require_non_negative(default_fee_, "default");
  for (size_t i = 0; i < breakpoints_.size(); ++i) {
    require_non_negative(breakpoints_[i].fee, "breakpoint");
    if (i > 0 && !(breakpoints_[i - 1].at < breakpoints_[i].at)) {
      throw Error(ErrorKind::kUnsortedBreakpoints,
                  "breakpoint positions must be strictly increasing at " +
                      to_string(breakpoints_[i].at));
    }
  }
  for (const auto& o : overrides_) require_non_negative(o.fee, "override");
  std::sort(overrides_.begin(), overrides_.end(),
            [](const FeePoint& a, const FeePoint& b) { return a.at < b.at; });
  for (size_t i = 1; i < overrides_.size(); ++i) {
    if (overrides_[i - 1].at == overrides_[i].at) {
      throw Error(ErrorKind::kDuplicateOverride,
                  "duplicate override at " + to_string(overrides_[i].at));
    }
  }

  for (const auto& b : breakpoints_) special_.push_back(b.at);
  for (const auto& o : overrides_) special_.push_back(o.at);
  std::sort(special_.begin(), special_.end());
  special_.erase(std::unique(special_.begin(), special_.end()), special_.end());

  for (const auto& p : special_) {
    const ExtRational here = eval(p);
    if (here > min(left_limit(p), base(p))) {
      throw Error(ErrorKind::kLscViolation,
                  "fee is not lower semi-continuous at " + to_string(p) +
                      ": e = " + to_string(here) + " exceeds a one-sided limit");
    }
  }

  bool any_finite = default_fee_.is_finite();
  for (const auto& b : breakpoints_) any_finite = any_finite || b.fee.is_finite();
  for (const auto& o : overrides_) any_finite = any_finite || o.fee.is_finite();
  if (!any_finite) {
    throw Error(ErrorKind::kNoFiniteFee, "fee is +inf everywhere");
  }
}

const FeePoint* EntranceFee::find_override(const Rational& x) const {
  auto it = std::lower_bound(
      overrides_.begin(), overrides_.end(), x,
      [](const FeePoint& o, const Rational& v) { return o.at < v; });
  if (it != overrides_.end() && it->at == x) return &*it;
  return nullptr;
}

const ExtRational& EntranceFee::base(const Rational& x) const {
  auto it = std::upper_bound(
      breakpoints_.begin(), breakpoints_.end(), x,
      [](const Rational& v, const FeePoint& b) { return v < b.at; });
  if (it == breakpoints_.begin()) return default_fee_;
  return std::prev(it)->fee;
}

const ExtRational& EntranceFee::left_limit(const Rational& x) const {
  auto it = std::lower_bound(
      breakpoints_.begin(), breakpoints_.end(), x,
      [](const FeePoint& b, const Rational& v) { return b.at < v; });
  if (it == breakpoints_.begin()) return default_fee_;
  return std::prev(it)->fee;
}

ExtRational EntranceFee::eval(const Rational& x) const {
  if (const FeePoint* o = find_override(x)) return o->fee;
  return base(x);
}

EntranceFee EntranceFee::shifted(const Rational& delta) const {
  auto shift = [&](std::vector<FeePoint> pts) {
    for (auto& p : pts) p.fee += ExtRational(delta);
    return pts;
  };
  return EntranceFee(default_fee_ + ExtRational(delta), shift(breakpoints_),
                     shift(overrides_));
}

FeeExtrema fee_extrema(const EntranceFee& fee) {
  // Every piece is a non-degenerate interval, so the default and every piece
  // fee is attained somewhere besides the finitely many override points.
  ExtRational lo = fee.default_fee();
  ExtRational hi = fee.default_fee();
  for (const auto& b : fee.breakpoints()) {
    lo = min(lo, b.fee);
    hi = max(hi, b.fee);
  }
  for (const auto& o : fee.overrides()) {
    lo = min(lo, o.fee);
    hi = max(hi, o.fee);
  }
  ExtRational r;
  if (lo.is_zero()) {
    r = hi.is_zero() ? ExtRational(1) : ExtRational::infinity();
  } else {
    r = hi / lo;
  }
  return {lo, hi, r};
}

AffineMin min_affine(const EntranceFee& fee, long a, long b, const Rational& lo,
                     const Rational& hi) {
  if (hi < lo) {
    throw Error(ErrorKind::kEmptyInterval,
                "empty interval [" + to_string(lo) + ", " + to_string(hi) + "]");
  }
  if (a < 0) throw Error(ErrorKind::kBadParams, "min_affine needs a >= 0");

  // Under lower semi-continuity the infimum over any piece is attained at
  // lo, hi, or a breakpoint/override, so those are the only candidates.
  std::vector<Rational> candidates{lo};
  const auto& sp = fee.special_points();
  for (auto it = std::upper_bound(sp.begin(), sp.end(), lo);
       it != sp.end() && *it < hi; ++it) {
    candidates.push_back(*it);
  }
  if (hi != lo) candidates.push_back(hi);

  const Rational a_q(a);
  const Rational b_q(b);
  bool have = false;
  AffineMin best{hi, ExtRational::infinity()};
  ExtRational best_fee = ExtRational::infinity();
  for (const auto& l : candidates) {
    const ExtRational f = fee.eval(l);
    if (f.is_infinite()) continue;
    ExtRational v = Rational(a_q * f.finite() + b_q * l);
    // Candidates arrive left to right, so ">=" on location keeps the
    // rightmost among equal (value, fee).
    if (!have || v < best.value || (v == best.value && f <= best_fee)) {
      best = {l, std::move(v)};
      best_fee = f;
      have = true;
    }
  }
  return best;
}

}  // namespace feeloc
