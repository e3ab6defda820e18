#include "cms/numeric.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <string>

#include "cms/error.hpp"

namespace cms {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

BigInt parse_integer(std::string_view s) {
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (!all_digits(digits)) throw InvalidArgument("not an integer: '" + std::string(s) + "'");
  std::string str(s);
  if (str.front() == '+') str.erase(0, 1);
  return BigInt(str, 10);
}

Rational pow10(long e) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0) return Rational(p);
  Rational r(BigInt(1), p);
  r.canonicalize();
  return r;
}

Rational floor_to_dyadic(const Rational& x, unsigned bits) {
  BigInt scaled = x.get_num() << bits;
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
  Rational r(q, BigInt(1) << bits);
  r.canonicalize();
  return r;
}

Rational ceil_to_dyadic(const Rational& x, unsigned bits) {
  BigInt scaled = x.get_num() << bits;
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
  Rational r(q, BigInt(1) << bits);
  r.canonicalize();
  return r;
}

Rational from_mpfr(const mpfr_t value) {
  if (mpfr_zero_p(value)) return Rational(0);
  if (!mpfr_number_p(value)) throw InvalidArgument("non-finite MPFR value");
  BigInt mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), value);
  Rational r(mant);
  if (e >= 0) {
    r *= pow2(static_cast<long>(e));
  } else {
    r /= pow2(-static_cast<long>(e));
  }
  return r;
}

// RAII holder; mpfr_t is an array type and cannot live in a container directly.
struct Mpfr {
  mpfr_t v;
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

mpfr_prec_t working_precision(unsigned bits, std::size_t magnitude_bits) {
  return static_cast<mpfr_prec_t>(bits + 64 + 2 * magnitude_bits);
}

std::size_t bit_length(const BigInt& v) { return mpz_sizeinbase(v.get_mpz_t(), 2); }

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw InvalidArgument("empty rational");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(s.substr(0, slash));
    BigInt den = parse_integer(s.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    BigInt ex = parse_integer(s.substr(e + 1));
    if (!ex.fits_slong_p() || abs(Rational(ex)) > 100000) {
      throw InvalidArgument("exponent out of range in '" + std::string(text) + "'");
    }
    exponent = ex.get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) {
      throw InvalidArgument("malformed number '" + std::string(text) + "'");
    }
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw InvalidArgument("malformed number '" + std::string(text) + "'");
    digits = std::string(s);
  }
  if (digits.empty()) digits = "0";
  Rational r(BigInt(digits, 10));
  r *= pow10(exponent);
  if (negative) r = -r;
  return r;
}

std::string to_string(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const BigInt& value) { return value.get_str(); }

double to_double(const Rational& value) { return mpq_get_d(value.get_mpq_t()); }

Rational pow2(long exponent) {
  BigInt p = BigInt(1) << static_cast<mp_bitcnt_t>(exponent < 0 ? -exponent : exponent);
  if (exponent >= 0) return Rational(p);
  Rational r(BigInt(1), p);
  return r;
}

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

Interval::Interval(Rational point) : lo_(point), hi_(std::move(point)) {
  lo_.canonicalize();
  hi_.canonicalize();
}

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  lo_.canonicalize();
  hi_.canonicalize();
  if (lo_ > hi_) throw InvalidArgument("interval with lo > hi: [" + to_string(lo_) + ", " + to_string(hi_) + "]");
}

Interval Interval::rounded_outward(unsigned bits) const {
  return Interval(floor_to_dyadic(lo_, bits), ceil_to_dyadic(hi_, bits));
}

Interval& Interval::operator+=(const Interval& other) {
  lo_ += other.lo_;
  hi_ += other.hi_;
  return *this;
}

Interval& Interval::operator-=(const Interval& other) {
  Rational lo = lo_ - other.hi_;
  hi_ -= other.lo_;
  lo_ = std::move(lo);
  return *this;
}

Interval operator*(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
  return Interval(*mn, *mx);
}

Interval operator*(const Rational& scale, const Interval& a) {
  if (scale >= 0) return Interval(scale * a.lo_, scale * a.hi_);
  return Interval(scale * a.hi_, scale * a.lo_);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo_ <= 0 && b.hi_ >= 0) throw InvalidArgument("interval division by an interval containing 0");
  Rational lo = 1 / b.hi_;
  Rational hi = 1 / b.lo_;
  return a * Interval(lo, hi);
}

Interval operator/(const Interval& a, const Rational& divisor) {
  if (divisor == 0) throw InvalidArgument("interval division by 0");
  return Rational(1 / divisor) * a;
}

Interval abs_difference(const Interval& a, const Interval& b) {
  Interval d = a - b;
  if (d.lo() >= 0) return d;
  if (d.hi() <= 0) return Interval(-d.hi(), -d.lo());
  return Interval(Rational(0), std::max(Rational(-d.lo()), d.hi()));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

std::string to_string(const Interval& value) {
  if (value.is_point()) return to_string(value.lo());
  return "[" + to_string(value.lo()) + ", " + to_string(value.hi()) + "]";
}

Interval log_interval(const Rational& x, unsigned bits) {
  if (x <= 0) throw InvalidArgument("log of non-positive value " + to_string(x));
  if (x == 1) return Interval(Rational(0));
  std::size_t mag = std::max(bit_length(x.get_num()), bit_length(x.get_den()));
  mpfr_prec_t prec = working_precision(bits, std::min<std::size_t>(mag, 64));
  Mpfr in(prec + static_cast<mpfr_prec_t>(mag));
  Mpfr out(prec);
  mpfr_set_q(in.v, x.get_mpq_t(), MPFR_RNDD);
  mpfr_log(out.v, in.v, MPFR_RNDD);
  Rational lo = from_mpfr(out.v);
  mpfr_set_q(in.v, x.get_mpq_t(), MPFR_RNDU);
  mpfr_log(out.v, in.v, MPFR_RNDU);
  Rational hi = from_mpfr(out.v);
  return Interval(lo, hi).rounded_outward(bits);
}

Interval log_interval(const Interval& x, unsigned bits) {
  if (x.lo() <= 0) throw InvalidArgument("log of interval reaching non-positive values");
  Interval a = log_interval(x.lo(), bits);
  Interval b = log_interval(x.hi(), bits);
  return Interval(a.lo(), b.hi());
}

Interval log_ratio_interval(const BigInt& value, unsigned long divisor, unsigned bits) {
  if (value <= 0) throw InvalidArgument("log of non-positive integer " + value.get_str());
  if (divisor == 0) throw InvalidArgument("log ratio with zero divisor");
  std::size_t mag = bit_length(value);
  mpfr_prec_t prec = working_precision(bits, std::min<std::size_t>(mag, 64));
  Mpfr in(static_cast<mpfr_prec_t>(mag) + 2);
  Mpfr out(prec);
  mpfr_set_z(in.v, value.get_mpz_t(), MPFR_RNDN);  // exact: precision covers every bit
  mpfr_log(out.v, in.v, MPFR_RNDD);
  mpfr_div_ui(out.v, out.v, divisor, MPFR_RNDD);
  Rational lo = from_mpfr(out.v);
  mpfr_log(out.v, in.v, MPFR_RNDU);
  mpfr_div_ui(out.v, out.v, divisor, MPFR_RNDU);
  Rational hi = from_mpfr(out.v);
  return Interval(lo, hi).rounded_outward(bits);
}

}  // namespace cms
