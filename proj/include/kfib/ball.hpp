#pragma once

// Ball arithmetic: an MPFR midpoint with an upward-rounded radius.
//
// Every operation returns a ball that contains the exact result for every
// choice of points in the input balls.  Midpoints are rounded to nearest at
// the working precision and the rounding error is folded into the radius.
// Radii are 64-bit MPFR numbers, always rounded toward +inf.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "kfib/errors.hpp"

namespace kfib::num {

inline constexpr long kRadiusBits = 64;
inline constexpr long kDefaultBits = 256;

class Ball {
 public:
  Ball() : Ball(kDefaultBits) {}
  explicit Ball(long bits);
  Ball(const Ball& other);
  Ball(Ball&& other) noexcept;
  Ball& operator=(const Ball& other);
  Ball& operator=(Ball&& other) noexcept;
  ~Ball();

  static Ball exact(long value, long bits = kDefaultBits);
  static Ball from_integer(const mpz_class& value, long bits = kDefaultBits);
  static Ball from_rational(const mpq_class& value, long bits = kDefaultBits);
  /* Accepts "3.5", "-2.64e35", "5.29E-214"; parsed exactly, then rounded. */
  static Ball from_decimal(std::string_view text, long bits = kDefaultBits);
  /* Smallest ball (at `bits`) containing the closed interval [lo, hi]. */
  static Ball from_endpoints(const mpq_class& lo, const mpq_class& hi, long bits = kDefaultBits);
  /* Rebuilds a ball from the strings produced by mid_decimal()/rad_decimal(). */
  static Ball from_strings(const std::string& mid, const std::string& rad, long bits);

  long precision() const { return static_cast<long>(mpfr_get_prec(mid_)); }
  mpfr_srcptr mid() const { return mid_; }
  mpfr_srcptr rad() const { return rad_; }
  bool is_exact() const { return mpfr_zero_p(rad_) != 0; }

  /* Adds a non-negative quantity to the radius. */
  Ball& widen(const mpq_class& extra);
  Ball& widen(mpfr_srcptr extra);
  /* Same value, new working precision; rounding is absorbed in the radius. */
  Ball with_precision(long bits) const;

  mpq_class mid_q() const;
  mpq_class rad_q() const;
  mpq_class lower_q() const;
  mpq_class upper_q() const;

  bool contains(const mpq_class& value) const;
  bool contains(const Ball& inner) const;
  bool overlaps(const Ball& other) const;
  bool certainly_positive() const;
  bool certainly_negative() const;
  bool contains_zero() const { return !certainly_positive() && !certainly_negative(); }

  double to_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  /* log2 of the radius, -inf for exact balls. */
  double rad_log2() const;

  /* Round-trip exact decimal renderings at this ball's precision. */
  std::string mid_decimal() const;
  std::string rad_decimal() const;
  std::string to_string(int digits = 20) const;

  // raw access for the arithmetic kernels in ball.cpp
  mpfr_ptr mid_raw() { return mid_; }
  mpfr_ptr rad_raw() { return rad_; }

 private:
  mpfr_t mid_;
  mpfr_t rad_;
};

Ball operator+(const Ball& a, const Ball& b);
Ball operator-(const Ball& a, const Ball& b);
Ball operator*(const Ball& a, const Ball& b);
Ball operator/(const Ball& a, const Ball& b);
Ball operator-(const Ball& a);

Ball operator+(const Ball& a, long b);
Ball operator-(const Ball& a, long b);
Ball operator*(const Ball& a, long b);
Ball operator/(const Ball& a, long b);
Ball operator+(long a, const Ball& b);
Ball operator-(long a, const Ball& b);
Ball operator*(long a, const Ball& b);
Ball operator/(long a, const Ball& b);
Ball operator*(const mpz_class& a, const Ball& b);

Ball log(const Ball& x);
Ball exp(const Ball& x);
Ball sqrt(const Ball& x);
Ball abs(const Ball& x);
Ball pow(const Ball& base, long exponent);
Ball pow(const Ball& base, const Ball& exponent);
/* Enclosures of max/min of two balls (exact when the balls separate). */
Ball max(const Ball& a, const Ball& b);
Ball min(const Ball& a, const Ball& b);

enum class Ordering { Less, Greater };

Ordering certified_compare(const Ball& x, const Ball& y);
/* x < y for every pair of points; throws PrecisionExhausted when undecided. */
bool certified_lt(const Ball& x, const Ball& y);
/* x <= y for every pair of points (exact equal balls count as <=). */
bool certified_le(const Ball& x, const Ball& y);
mpz_class certified_floor(const Ball& x);
/* Nearest integer and distance to it; throws when a half-integer is inside x. */
mpz_class certified_round(const Ball& x);
Ball distance_to_nearest_integer(const Ball& x);

struct PrecisionPolicy {
  long initial_bits = kDefaultBits;
  long factor_num = 2;  // escalation factor as a rational > 1
  long factor_den = 1;
  long max_bits = 1L << 20;

  void validate() const;
  long next(long bits) const;
};

/* Exact value of a decimal such as "2.64e35"; throws ConfigInvalid. */
mpq_class parse_decimal(std::string_view text);

/* Produces the same real number at any requested precision. */
using BallSource = std::function<Ball(long bits)>;

/* Runs fn(bits) with escalating precision until it stops throwing
 * PrecisionExhausted; rethrows once the policy's max_bits was tried. */
template <class Fn>
auto with_escalation(const PrecisionPolicy& policy, Fn&& fn) -> decltype(fn(0L)) {
  policy.validate();
  for (long bits = policy.initial_bits;; bits = policy.next(bits)) {
    try {
      return fn(bits);
    } catch (const PrecisionExhausted&) {
      if (bits >= policy.max_bits) throw;
    }
  }
}

Ordering certified_compare(const BallSource& x, const BallSource& y, const PrecisionPolicy& policy);
mpz_class certified_floor(const BallSource& x, const PrecisionPolicy& policy);

}  // namespace kfib::num
