#include "feeloc/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "feeloc/error.hpp"

namespace feeloc {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNegativeFee: return "NegativeFee";
    case ErrorKind::kUnsortedBreakpoints: return "UnsortedBreakpoints";
    case ErrorKind::kDuplicateOverride: return "DuplicateOverride";
    case ErrorKind::kLscViolation: return "LSC";
    case ErrorKind::kNoFiniteFee: return "NoFiniteFee";
    case ErrorKind::kEmptyInterval: return "EmptyInterval";
    case ErrorKind::kEmptyProfile: return "EmptyProfile";
    case ErrorKind::kInfeasible: return "Infeasible";
    case ErrorKind::kBadRange: return "BadRange";
    case ErrorKind::kBadIndex: return "BadIndex";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kBadParams: return "BadParams";
    case ErrorKind::kInvalidLottery: return "InvalidLottery";
    case ErrorKind::kParse: return "Parse";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

Rational make_rational(long n, long d) {
  if (d == 0) throw std::domain_error("zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw Error(ErrorKind::kParse,
              "not an exact number: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational q;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(text);
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) bad_number(text);
    q = Rational(n, d);
  } else {
    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      int_part = s.substr(0, dot);
      frac_part = s.substr(dot + 1);
      if (int_part.empty() && frac_part.empty()) bad_number(text);
      if (!frac_part.empty() && !all_digits(frac_part)) bad_number(text);
      if (!int_part.empty() && !all_digits(int_part)) bad_number(text);
    } else if (!all_digits(int_part)) {
      bad_number(text);
    }
    std::string digits = std::string(int_part) + std::string(frac_part);
    mpz_class n(digits.empty() ? std::string("0") : digits, 10);
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), 10, frac_part.size());
    q = Rational(n, d);
  }
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal(const Rational& q, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class num = q.get_num();
  const bool negative = num < 0;
  if (negative) num = -num;
  // round(|q| * 10^digits) with ties away from zero
  mpz_class scaled = (2 * num * scale + q.get_den()) / (2 * q.get_den());
  std::string s = scaled.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<size_t>(digits)) {
      s.insert(0, static_cast<size_t>(digits) + 1 - s.size(), '0');
    }
    s.insert(s.size() - static_cast<size_t>(digits), ".");
  }
  if (negative && scaled != 0) s.insert(0, "-");
  return s;
}

Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

const Rational& ExtRational::finite() const {
  if (infinite_) throw std::domain_error("value is +inf");
  return value_;
}

ExtRational& ExtRational::operator+=(const ExtRational& rhs) {
  if (rhs.infinite_) {
    infinite_ = true;
    value_ = 0;
  } else if (!infinite_) {
    value_ += rhs.value_;
  }
  return *this;
}

ExtRational& ExtRational::operator-=(const Rational& rhs) {
  if (!infinite_) value_ -= rhs;
  return *this;
}

ExtRational operator-(const ExtRational& lhs, const ExtRational& rhs) {
  if (rhs.infinite_) throw std::domain_error("subtracting +inf");
  return lhs - rhs.value_;
}

ExtRational operator*(const Rational& scalar, const ExtRational& v) {
  if (sgn(scalar) < 0) throw std::domain_error("negative scale of ExtRational");
  if (sgn(scalar) == 0) return ExtRational();
  if (v.infinite_) return ExtRational::infinity();
  return ExtRational(Rational(scalar * v.value_));
}

ExtRational operator/(const ExtRational& lhs, const ExtRational& rhs) {
  if (rhs.infinite_) throw std::domain_error("division by +inf");
  if (sgn(rhs.value_) == 0) throw std::domain_error("division by zero");
  if (lhs.infinite_) {
    if (sgn(rhs.value_) < 0) throw std::domain_error("-inf result");
    return ExtRational::infinity();
  }
  return ExtRational(Rational(lhs.value_ / rhs.value_));
}

bool operator==(const ExtRational& lhs, const ExtRational& rhs) {
  if (lhs.infinite_ || rhs.infinite_) return lhs.infinite_ == rhs.infinite_;
  return lhs.value_ == rhs.value_;
}

std::strong_ordering operator<=>(const ExtRational& lhs,
                                 const ExtRational& rhs) {
  if (lhs.infinite_ || rhs.infinite_) {
    return static_cast<int>(lhs.infinite_) <=> static_cast<int>(rhs.infinite_);
  }
  return cmp(lhs.value_, rhs.value_) <=> 0;
}

ExtRational min(const ExtRational& a, const ExtRational& b) {
  return b < a ? b : a;
}

ExtRational max(const ExtRational& a, const ExtRational& b) {
  return a < b ? b : a;
}

ExtRational parse_ext(std::string_view text) {
  if (text == "inf" || text == "+inf" || text == "Infinity") {
    return ExtRational::infinity();
  }
  return ExtRational(parse_rational(text));
}

std::string to_string(const ExtRational& v) {
  return v.is_infinite() ? std::string("inf") : to_string(v.finite());
}

std::string to_decimal(const ExtRational& v, int digits) {
  return v.is_infinite() ? std::string("inf") : to_decimal(v.finite(), digits);
}

std::ostream& operator<<(std::ostream& os, const ExtRational& v) {
  return os << to_string(v);
}

}  // namespace feeloc
