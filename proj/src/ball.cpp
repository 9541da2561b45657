#include "kfib/ball.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

namespace kfib::num {

namespace {

/* Scratch MPFR value; radius arithmetic happens at kRadiusBits, rounded up. */
class Tmp {
 public:
  explicit Tmp(long bits = kRadiusBits) { mpfr_init2(v_, bits); }
  ~Tmp() { mpfr_clear(v_); }
  Tmp(const Tmp&) = delete;
  Tmp& operator=(const Tmp&) = delete;
  operator mpfr_ptr() { return v_; }

 private:
  mpfr_t v_;
};

/* Adds one ulp of `mid` to `rad` when the midpoint operation was inexact. */
void add_rounding(mpfr_ptr rad, mpfr_srcptr mid, int ternary) {
  if (ternary == 0) return;
  Tmp t;
  if (mpfr_zero_p(mid))
    mpfr_set_ui_2exp(t, 1, mpfr_get_emin(), MPFR_RNDU);
  else
    mpfr_set_ui_2exp(t, 1, mpfr_get_exp(mid) - static_cast<mpfr_exp_t>(mpfr_get_prec(mid)), MPFR_RNDU);
  mpfr_add(rad, rad, t, MPFR_RNDU);
}

void check_finite(const Ball& b) {
  if (!mpfr_number_p(b.mid()) || !mpfr_number_p(b.rad()))
    throw PrecisionExhausted("ball overflowed the exponent range");
}

mpq_class mpfr_to_q(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return mpq_class(0);
  mpz_class m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
  mpq_class q(m);
  if (e >= 0)
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return q;
}

/* |mid| - rad rounded down; the certified lower bound on |x|. */
void abs_lower(mpfr_ptr out, const Ball& x) {
  Tmp a(x.precision());
  mpfr_abs(a, x.mid(), MPFR_RNDN);
  mpfr_sub(out, a, x.rad(), MPFR_RNDD);
}

}  // namespace

mpq_class parse_decimal(std::string_view text) {
  std::size_t i = 0;
  auto bad = [&] { return ConfigInvalid("not a decimal number: '" + std::string(text) + "'"); };
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
  std::string digits;
  long frac = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) ++frac;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw bad();
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    std::size_t used = 0;
    try {
      exponent = std::stol(std::string(text.substr(i)), &used);
    } catch (const std::exception&) {
      throw bad();
    }
    i += used;
  }
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i != text.size()) throw bad();

  mpz_class num(digits, 10);
  long shift = exponent - frac;
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  mpq_class q = shift >= 0 ? mpq_class(num * p10) : mpq_class(num, p10);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

namespace {

long result_bits(const Ball& a, const Ball& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

// ---------------------------------------------------------------- lifecycle

Ball::Ball(long bits) {
  if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) throw DomainError("ball precision out of range");
  mpfr_init2(mid_, bits);
  mpfr_init2(rad_, kRadiusBits);
  mpfr_set_zero(mid_, 1);
  mpfr_set_zero(rad_, 1);
}

Ball::Ball(const Ball& other) {
  mpfr_init2(mid_, mpfr_get_prec(other.mid_));
  mpfr_init2(rad_, kRadiusBits);
  mpfr_set(mid_, other.mid_, MPFR_RNDN);
  mpfr_set(rad_, other.rad_, MPFR_RNDU);
}

Ball::Ball(Ball&& other) noexcept {
  mpfr_init2(mid_, MPFR_PREC_MIN);
  mpfr_init2(rad_, kRadiusBits);
  mpfr_set_zero(mid_, 1);
  mpfr_set_zero(rad_, 1);
  mpfr_swap(mid_, other.mid_);
  mpfr_swap(rad_, other.rad_);
}

Ball& Ball::operator=(const Ball& other) {
  if (this != &other) {
    mpfr_set_prec(mid_, mpfr_get_prec(other.mid_));
    mpfr_set(mid_, other.mid_, MPFR_RNDN);
    mpfr_set(rad_, other.rad_, MPFR_RNDU);
  }
  return *this;
}

Ball& Ball::operator=(Ball&& other) noexcept {
  if (this != &other) mpfr_swap(mid_, other.mid_), mpfr_swap(rad_, other.rad_);
  return *this;
}

Ball::~Ball() {
  mpfr_clear(mid_);
  mpfr_clear(rad_);
}

// ------------------------------------------------------------- constructors

Ball Ball::exact(long value, long bits) {
  Ball b(bits);
  int t = mpfr_set_si(b.mid_, value, MPFR_RNDN);
  add_rounding(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::from_integer(const mpz_class& value, long bits) {
  Ball b(bits);
  int t = mpfr_set_z(b.mid_, value.get_mpz_t(), MPFR_RNDN);
  add_rounding(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::from_rational(const mpq_class& value, long bits) {
  Ball b(bits);
  int t = mpfr_set_q(b.mid_, value.get_mpq_t(), MPFR_RNDN);
  if (t != 0) {
    mpq_class err = value - mpfr_to_q(b.mid_);
    mpq_abs(err.get_mpq_t(), err.get_mpq_t());
    mpfr_set_q(b.rad_, err.get_mpq_t(), MPFR_RNDU);
  }
  return b;
}

Ball Ball::from_decimal(std::string_view text, long bits) { return from_rational(parse_decimal(text), bits); }

Ball Ball::from_endpoints(const mpq_class& lo, const mpq_class& hi, long bits) {
  if (lo > hi) throw DomainError("from_endpoints: lo > hi");
  Ball b(bits);
  mpq_class centre = (lo + hi) / 2;
  mpfr_set_q(b.mid_, centre.get_mpq_t(), MPFR_RNDN);
  mpq_class m = mpfr_to_q(b.mid_);
  mpq_class r = std::max(mpq_class(m - lo), mpq_class(hi - m));
  mpfr_set_q(b.rad_, r.get_mpq_t(), MPFR_RNDU);
  return b;
}

Ball Ball::from_strings(const std::string& mid, const std::string& rad, long bits) {
  Ball b(bits);
  if (mpfr_set_str(b.mid_, mid.c_str(), 10, MPFR_RNDN) != 0 || !mpfr_number_p(b.mid_))
    throw ConfigInvalid("bad ball midpoint '" + mid + "'");
  if (mpfr_set_str(b.rad_, rad.c_str(), 10, MPFR_RNDU) != 0 || !mpfr_number_p(b.rad_))
    throw ConfigInvalid("bad ball radius '" + rad + "'");
  if (mpfr_sgn(b.rad_) < 0) throw ConfigInvalid("negative ball radius");
  return b;
}

// ----------------------------------------------------------------- queries

Ball& Ball::widen(const mpq_class& extra) {
  if (sgn(extra) < 0) throw DomainError("widen by a negative amount");
  Tmp t;
  mpfr_set_q(t, extra.get_mpq_t(), MPFR_RNDU);
  mpfr_add(rad_, rad_, t, MPFR_RNDU);
  return *this;
}

Ball& Ball::widen(mpfr_srcptr extra) {
  if (mpfr_sgn(extra) < 0) throw DomainError("widen by a negative amount");
  mpfr_add(rad_, rad_, extra, MPFR_RNDU);
  return *this;
}

Ball Ball::with_precision(long bits) const {
  Ball b(bits);
  int t = mpfr_set(b.mid_, mid_, MPFR_RNDN);
  mpfr_set(b.rad_, rad_, MPFR_RNDU);
  add_rounding(b.rad_, b.mid_, t);
  return b;
}

mpq_class Ball::mid_q() const { return mpfr_to_q(mid_); }
mpq_class Ball::rad_q() const { return mpfr_to_q(rad_); }
mpq_class Ball::lower_q() const { return mid_q() - rad_q(); }
mpq_class Ball::upper_q() const { return mid_q() + rad_q(); }

bool Ball::contains(const mpq_class& value) const {
  mpq_class d = value - mid_q();
  mpq_abs(d.get_mpq_t(), d.get_mpq_t());
  return d <= rad_q();
}

bool Ball::contains(const Ball& inner) const {
  return lower_q() <= inner.lower_q() && inner.upper_q() <= upper_q();
}

bool Ball::overlaps(const Ball& other) const {
  return !(upper_q() < other.lower_q() || other.upper_q() < lower_q());
}

bool Ball::certainly_positive() const { return mpfr_sgn(mid_) > 0 && mpfr_cmpabs(mid_, rad_) > 0; }
bool Ball::certainly_negative() const { return mpfr_sgn(mid_) < 0 && mpfr_cmpabs(mid_, rad_) > 0; }

double Ball::rad_log2() const {
  if (mpfr_zero_p(rad_)) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double d = mpfr_get_d_2exp(&e, rad_, MPFR_RNDN);
  return std::log2(d) + static_cast<double>(e);
}

namespace {
std::string render(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return "0";
  mpfr_exp_t e = 0;
  char* s = mpfr_get_str(nullptr, &e, 10, 0, x, MPFR_RNDN);
  std::string digits(s);
  mpfr_free_str(s);
  std::string out;
  if (digits[0] == '-') out.push_back('-'), digits.erase(0, 1);
  out.push_back(digits[0]);
  std::string rest = digits.substr(1);
  while (!rest.empty() && rest.back() == '0') rest.pop_back();
  if (!rest.empty()) out += "." + rest;
  out += "e" + std::to_string(static_cast<long>(e) - 1);
  return out;
}
}  // namespace

std::string Ball::mid_decimal() const { return render(mid_); }
std::string Ball::rad_decimal() const { return render(rad_); }

std::string Ball::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re +/- %.3Re", std::max(digits - 1, 0), mid_, rad_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

// -------------------------------------------------------------- arithmetic

Ball operator+(const Ball& a, const Ball& b) {
  Ball r(result_bits(a, b));
  int t = mpfr_add(r.mid_raw(), a.mid(), b.mid(), MPFR_RNDN);
  mpfr_add(r.rad_raw(), a.rad(), b.rad(), MPFR_RNDU);
  add_rounding(r.rad_raw(), r.mid(), t);
  check_finite(r);
  return r;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball r(result_bits(a, b));
  int t = mpfr_sub(r.mid_raw(), a.mid(), b.mid(), MPFR_RNDN);
  mpfr_add(r.rad_raw(), a.rad(), b.rad(), MPFR_RNDU);
  add_rounding(r.rad_raw(), r.mid(), t);
  check_finite(r);
  return r;
}

Ball operator-(const Ball& a) {
  Ball r(a);
  mpfr_neg(r.mid_raw(), r.mid(), MPFR_RNDN);
  return r;
}

Ball operator*(const Ball& a, const Ball& b) {
  Ball r(result_bits(a, b));
  int t = mpfr_mul(r.mid_raw(), a.mid(), b.mid(), MPFR_RNDN);
  // |a| rb + |b| ra + ra rb
  Tmp x, y;
  mpfr_abs(x, a.mid(), MPFR_RNDU);
  mpfr_mul(x, x, b.rad(), MPFR_RNDU);
  mpfr_abs(y, b.mid(), MPFR_RNDU);
  mpfr_mul(y, y, a.rad(), MPFR_RNDU);
  mpfr_add(x, x, y, MPFR_RNDU);
  mpfr_mul(y, a.rad(), b.rad(), MPFR_RNDU);
  mpfr_add(r.rad_raw(), x, y, MPFR_RNDU);
  add_rounding(r.rad_raw(), r.mid(), t);
  check_finite(r);
  return r;
}

Ball operator/(const Ball& a, const Ball& b) {
  Tmp denom_low;
  abs_lower(denom_low, b);
  if (mpfr_sgn(static_cast<mpfr_ptr>(denom_low)) <= 0) throw PrecisionExhausted("division by a ball that contains zero");
  Ball r(result_bits(a, b));
  int t = mpfr_div(r.mid_raw(), a.mid(), b.mid(), MPFR_RNDN);
  // (ra + |a/b| rb) / (|b| - rb)
  Tmp q, x;
  mpfr_abs(q, a.mid(), MPFR_RNDU);
  Tmp babs;
  mpfr_abs(babs, b.mid(), MPFR_RNDD);
  mpfr_div(q, q, babs, MPFR_RNDU);
  mpfr_mul(q, q, b.rad(), MPFR_RNDU);
  mpfr_add(x, a.rad(), q, MPFR_RNDU);
  mpfr_div(r.rad_raw(), x, denom_low, MPFR_RNDU);
  add_rounding(r.rad_raw(), r.mid(), t);
  check_finite(r);
  return r;
}

Ball operator+(const Ball& a, long b) { return a + Ball::exact(b, a.precision()); }
Ball operator-(const Ball& a, long b) { return a - Ball::exact(b, a.precision()); }
Ball operator*(const Ball& a, long b) { return a * Ball::exact(b, a.precision()); }
Ball operator/(const Ball& a, long b) { return a / Ball::exact(b, a.precision()); }
Ball operator+(long a, const Ball& b) { return Ball::exact(a, b.precision()) + b; }
Ball operator-(long a, const Ball& b) { return Ball::exact(a, b.precision()) - b; }
Ball operator*(long a, const Ball& b) { return Ball::exact(a, b.precision()) * b; }
Ball operator/(long a, const Ball& b) { return Ball::exact(a, b.precision()) / b; }
Ball operator*(const mpz_class& a, const Ball& b) { return Ball::from_integer(a, b.precision()) * b; }

Ball log(const Ball& x) {
  if (!x.certainly_positive()) throw PrecisionExhausted("log of a ball not separated from 0");
  Tmp low;
  mpfr_sub(low, x.mid(), x.rad(), MPFR_RNDD);
  if (mpfr_sgn(static_cast<mpfr_ptr>(low)) <= 0) throw PrecisionExhausted("log of a ball not separated from 0");
  Ball r(x.precision());
  int t = mpfr_log(r.mid_raw(), x.mid(), MPFR_RNDN);
  // |log y - log m| <= rad / (m - rad)
  mpfr_div(r.rad_raw(), x.rad(), low, MPFR_RNDU);
  add_rounding(r.rad_raw(), r.mid(), t);
  check_finite(r);
  return r;
}

Ball exp(const Ball& x) {
  Ball r(x.precision());
  int t = mpfr_exp(r.mid_raw(), x.mid(), MPFR_RNDN);
  if (!x.is_exact()) {
    Tmp e, m;
    mpfr_exp(e, x.mid(), MPFR_RNDU);
    mpfr_expm1(m, x.rad(), MPFR_RNDU);
    mpfr_mul(r.rad_raw(), e, m, MPFR_RNDU);
  }
  add_rounding(r.rad_raw(), r.mid(), t);
  check_finite(r);
  return r;
}

Ball sqrt(const Ball& x) {
  if (x.is_exact() && mpfr_zero_p(x.mid())) return x;
  if (!x.certainly_positive()) throw PrecisionExhausted("sqrt of a ball not separated from 0");
  Ball r(x.precision());
  int t = mpfr_sqrt(r.mid_raw(), x.mid(), MPFR_RNDN);
  if (!x.is_exact()) {
    // rad / (sqrt(m - rad) + sqrt(m))
    Tmp low, s1, s2;
    mpfr_sub(low, x.mid(), x.rad(), MPFR_RNDD);
    mpfr_sqrt(s1, low, MPFR_RNDD);
    mpfr_sqrt(s2, x.mid(), MPFR_RNDD);
    mpfr_add(s1, s1, s2, MPFR_RNDD);
    mpfr_div(r.rad_raw(), x.rad(), s1, MPFR_RNDU);
  }
  add_rounding(r.rad_raw(), r.mid(), t);
  return r;
}

Ball abs(const Ball& x) {
  Ball r(x);
  mpfr_abs(r.mid_raw(), r.mid(), MPFR_RNDN);
  return r;
}

Ball pow(const Ball& base, long exponent) {
  if (exponent < 0) return Ball::exact(1, base.precision()) / pow(base, -exponent);
  Ball result = Ball::exact(1, base.precision());
  Ball square = base;
  unsigned long e = static_cast<unsigned long>(exponent);
  while (e != 0) {
    if (e & 1UL) result = result * square;
    e >>= 1;
    if (e != 0) square = square * square;
  }
  return result;
}

Ball pow(const Ball& base, const Ball& exponent) {
  if (exponent.is_exact() && mpfr_integer_p(exponent.mid()) && mpfr_fits_slong_p(exponent.mid(), MPFR_RNDN))
    return pow(base.with_precision(result_bits(base, exponent)), mpfr_get_si(exponent.mid(), MPFR_RNDN));
  return exp(exponent * log(base));
}

Ball max(const Ball& a, const Ball& b) {
  mpq_class alo = a.lower_q(), ahi = a.upper_q(), blo = b.lower_q(), bhi = b.upper_q();
  if (alo >= bhi) return a;
  if (blo >= ahi) return b;
  return Ball::from_endpoints(std::max(alo, blo), std::max(ahi, bhi), result_bits(a, b));
}

Ball min(const Ball& a, const Ball& b) {
  mpq_class alo = a.lower_q(), ahi = a.upper_q(), blo = b.lower_q(), bhi = b.upper_q();
  if (ahi <= blo) return a;
  if (bhi <= alo) return b;
  return Ball::from_endpoints(std::min(alo, blo), std::min(ahi, bhi), result_bits(a, b));
}

// ------------------------------------------------------------ certification

Ordering certified_compare(const Ball& x, const Ball& y) {
  if (x.upper_q() < y.lower_q()) return Ordering::Less;
  if (y.upper_q() < x.lower_q()) return Ordering::Greater;
  throw PrecisionExhausted("cannot separate " + x.to_string(12) + " from " + y.to_string(12));
}

bool certified_lt(const Ball& x, const Ball& y) { return certified_compare(x, y) == Ordering::Less; }

bool certified_le(const Ball& x, const Ball& y) {
  if (x.upper_q() <= y.lower_q()) return true;
  if (x.lower_q() > y.upper_q()) return false;
  throw PrecisionExhausted("cannot decide " + x.to_string(12) + " <= " + y.to_string(12));
}

mpz_class certified_floor(const Ball& x) {
  mpq_class lo = x.lower_q();
  mpz_class n;
  mpz_fdiv_q(n.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (x.upper_q() < mpq_class(n + 1)) return n;
  throw PrecisionExhausted("floor not certified for " + x.to_string(12));
}

mpz_class certified_round(const Ball& x) {
  mpq_class shifted = x.mid_q() + mpq_class(1, 2);
  mpz_class n;
  mpz_fdiv_q(n.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  mpq_class half(1, 2);
  if (x.lower_q() > n - half && x.upper_q() < n + half) return n;
  throw PrecisionExhausted("nearest integer not certified for " + x.to_string(12));
}

Ball distance_to_nearest_integer(const Ball& x) {
  mpz_class n = certified_round(x);
  return abs(x - Ball::from_integer(n, x.precision()));
}

void PrecisionPolicy::validate() const {
  if (initial_bits < MPFR_PREC_MIN || max_bits < initial_bits)
    throw DomainError("precision policy needs 2 <= initial_bits <= max_bits");
  if (factor_den <= 0 || factor_num <= factor_den) throw DomainError("escalation factor must be a rational > 1");
}

long PrecisionPolicy::next(long bits) const {
  if (bits >= max_bits) return max_bits;
  long grown = static_cast<long>((static_cast<__int128>(bits) * factor_num) / factor_den);
  if (grown <= bits) grown = bits + 1;
  return std::min(grown, max_bits);
}

Ordering certified_compare(const BallSource& x, const BallSource& y, const PrecisionPolicy& policy) {
  return with_escalation(policy, [&](long bits) { return certified_compare(x(bits), y(bits)); });
}

mpz_class certified_floor(const BallSource& x, const PrecisionPolicy& policy) {
  return with_escalation(policy, [&](long bits) { return certified_floor(x(bits)); });
}

}  // namespace kfib::num
