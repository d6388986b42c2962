#pragma once

/**
 * Exact arithmetic used throughout the library.
 *
 * `Rational` is a GMP rational and is used for anything that can never be
 * infinite: positions, probabilities, travel distances. `ExtRational` adds a
 * single distinguished +inf and is used for fees and costs. There is no -inf;
 * operations that would produce one throw std::domain_error.
 */

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace feeloc {

using Rational = mpq_class;

// n/d in canonical form. Throws std::domain_error when d == 0.
Rational make_rational(long n, long d = 1);

// Parses "7", "-3.01", "1/100", "+2/4". Throws Error(kParse) on malformed
// input.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form, or "p" when the denominator is 1.
std::string to_string(const Rational& q);

// Half-away-from-zero rounding to `digits` decimals, e.g. "2.197605".
std::string to_decimal(const Rational& q, int digits = 6);

Rational abs(const Rational& q);

class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  ExtRational(const Rational& q) : value_(q) {}  // NOLINT
  ExtRational(Rational&& q) : value_(std::move(q)) {}  // NOLINT

  static ExtRational infinity() {
    ExtRational r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  bool is_zero() const { return !infinite_ && sgn(value_) == 0; }

  // Throws std::domain_error on +inf.
  const Rational& finite() const;

  ExtRational& operator+=(const ExtRational& rhs);
  ExtRational& operator-=(const Rational& rhs);

  friend ExtRational operator+(ExtRational lhs, const ExtRational& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend ExtRational operator-(ExtRational lhs, const Rational& rhs) {
    lhs -= rhs;
    return lhs;
  }
  // inf - inf and finite - inf are undefined here.
  friend ExtRational operator-(const ExtRational& lhs, const ExtRational& rhs);

  // Multiplication by a non-negative scalar. 0 * inf is 0 (a zero-probability
  // branch contributes nothing to an expectation).
  friend ExtRational operator*(const Rational& scalar, const ExtRational& v);

  // Division; inf / positive = inf, finite / inf is rejected.
  friend ExtRational operator/(const ExtRational& lhs, const ExtRational& rhs);

  friend bool operator==(const ExtRational& lhs, const ExtRational& rhs);
  friend std::strong_ordering operator<=>(const ExtRational& lhs,
                                          const ExtRational& rhs);

 private:
  Rational value_;
  bool infinite_ = false;
};

ExtRational min(const ExtRational& a, const ExtRational& b);
ExtRational max(const ExtRational& a, const ExtRational& b);

// Accepts everything parse_rational does plus "inf" / "+inf".
ExtRational parse_ext(std::string_view text);
std::string to_string(const ExtRational& v);
std::string to_decimal(const ExtRational& v, int digits = 6);

std::ostream& operator<<(std::ostream& os, const ExtRational& v);

}  // namespace feeloc
