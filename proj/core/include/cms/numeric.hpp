#pragma once

// Exact rationals, big integers and directed rational intervals.
//
// Irrational quantities (logarithms of roof values, entropy estimates) are
// carried as closed intervals with rational endpoints. Every arithmetic
// operation on Interval is outward-sound: the true value of the combined
// expression lies inside the result whenever the inputs contained theirs.

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cms {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal/scientific literal ("0.25", "1e-3")
/// into an exact rational. Throws InvalidArgument on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

/// Display-only conversion.
double to_double(const Rational& value);

/// 2^exponent as an exact rational; exponent may be negative.
Rational pow2(long exponent);

Rational abs(const Rational& value);

class Interval {
 public:
  Interval() = default;
  explicit Interval(Rational point);
  Interval(Rational lo, Rational hi);

  static Interval point(long value) { return Interval(Rational(value)); }

  const Rational& lo() const noexcept { return lo_; }
  const Rational& hi() const noexcept { return hi_; }

  Rational width() const { return hi_ - lo_; }
  Rational midpoint() const { return (lo_ + hi_) / 2; }
  bool is_point() const { return lo_ == hi_; }
  bool contains(const Rational& value) const { return lo_ <= value && value <= hi_; }
  bool certainly_positive() const { return lo_ > 0; }

  /// Smallest enclosing interval whose endpoints are multiples of 2^-bits.
  /// Keeps denominators bounded across long sums of logarithms.
  Interval rounded_outward(unsigned bits) const;

  Interval& operator+=(const Interval& other);
  Interval& operator-=(const Interval& other);

  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator*(const Rational& scale, const Interval& a);
  friend Interval operator*(const Interval& a, const Rational& scale) { return scale * a; }
  /// Throws InvalidArgument when the divisor interval contains zero.
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Rational& divisor);

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  Rational lo_{0};
  Rational hi_{0};
};

/// Enclosure of |a - b| given enclosures of a and b.
Interval abs_difference(const Interval& a, const Interval& b);

/// Hull of two intervals.
Interval hull(const Interval& a, const Interval& b);

std::string to_string(const Interval& value);

/// Certified enclosure of log(x) for x > 0, endpoints rounded outward to
/// 2^-bits. Backed by MPFR directed rounding.
Interval log_interval(const Rational& x, unsigned bits);
Interval log_interval(const Interval& x, unsigned bits);

/// Enclosure of log(value) / divisor for a positive big integer.
Interval log_ratio_interval(const BigInt& value, unsigned long divisor, unsigned bits);

}  // namespace cms
