#include "kfib/roots.hpp"

#include <bit>
#include <string>

namespace kfib {

using num::Ball;

namespace {

/* Plain MPFR Psi_k and Psi_k' at x (no error tracking). */
void psi_and_derivative(int k, mpfr_ptr p, mpfr_ptr dp, mpfr_srcptr x) {
  mpfr_set_ui(p, 1, MPFR_RNDN);
  mpfr_set_ui(dp, 0, MPFR_RNDN);
  for (int i = 0; i < k; ++i) {
    mpfr_mul(dp, dp, x, MPFR_RNDN);
    mpfr_add(dp, dp, p, MPFR_RNDN);
    mpfr_mul(p, p, x, MPFR_RNDN);
    mpfr_sub_ui(p, p, 1, MPFR_RNDN);
  }
}

int certified_sign(int k, const mpq_class& x, long bits) {
  Ball v = psi(k, Ball::from_rational(x, bits));
  if (v.certainly_positive()) return 1;
  if (v.certainly_negative()) return -1;
  return 0;
}

}  // namespace

Ball psi(int k, const Ball& x) {
  Ball p = Ball::exact(1, x.precision());
  for (int i = 0; i < k; ++i) p = p * x - 1;
  return p;
}

mpq_class root_lower_bracket(int k) {
  mpq_class lo(1);
  mpq_div_2exp(lo.get_mpq_t(), lo.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
  return 2 * (1 - lo);
}

Ball dominant_root(int k, long precision) {
  if (k < 2) throw DomainError("dominant_root needs k >= 2");
  if (precision < 8) precision = 8;
  const long guard = 64 + 2 * std::bit_width(static_cast<unsigned>(k));

  // Psi_k has one sign change in its coefficients, hence exactly one
  // positive root; Psi_k(2) = 1 > 0 and Psi_k(lo) < 0 bracket it.
  mpq_class lo = root_lower_bracket(k), hi(2);
  if (certified_sign(k, lo, 128 + k) >= 0) throw PrecisionExhausted("Psi_k not negative at the lower bracket");

  for (int i = 0; i < 40; ++i) {
    mpq_class mid = (lo + hi) / 2;
    int s = certified_sign(k, mid, 128 + k);
    if (s == 0) break;
    (s > 0 ? hi : lo) = mid;
  }

  for (long extra = guard;; extra *= 2) {
    const long bits = precision + extra;
    mpfr_t x, p, dp;
    mpfr_inits2(bits, x, p, dp, static_cast<mpfr_ptr>(nullptr));
    mpq_class start = (lo + hi) / 2;
    mpfr_set_q(x, start.get_mpq_t(), MPFR_RNDN);
    for (long b = 64;; b = std::min(2 * b, bits)) {
      mpfr_prec_round(x, b, MPFR_RNDN);
      mpfr_set_prec(p, b);
      mpfr_set_prec(dp, b);
      for (int it = 0; it < 3; ++it) {
        psi_and_derivative(k, p, dp, x);
        mpfr_div(p, p, dp, MPFR_RNDN);
        mpfr_sub(x, x, p, MPFR_RNDN);
      }
      if (b == bits) break;
    }
    mpq_class centre;
    {
      mpz_class m;
      mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
      centre = m;
      if (e >= 0)
        mpq_mul_2exp(centre.get_mpq_t(), centre.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
      else
        mpq_div_2exp(centre.get_mpq_t(), centre.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    }
    mpfr_clears(x, p, dp, static_cast<mpfr_ptr>(nullptr));

    mpq_class delta(1);
    mpq_div_2exp(delta.get_mpq_t(), delta.get_mpq_t(), static_cast<mp_bitcnt_t>(precision + 1));
    int below = certified_sign(k, centre - delta, bits);
    int above = certified_sign(k, centre + delta, bits);
    if (below < 0 && above > 0) {
      Ball out = Ball::from_rational(centre, bits);
      out.widen(delta);
      return out;
    }
    if (extra > 64L * precision + 4096)
      throw PrecisionExhausted("could not enclose alpha(" + std::to_string(k) + ")");
  }
}

Ball binet_coefficient(int k, const Ball& alpha) {
  return (alpha - 1) / (2 + (k + 1) * (alpha - 2));
}

KFibContext KFibContext::build(int k, long precision) {
  KFibContext ctx;
  ctx.k = k;
  ctx.precision = precision;
  ctx.alpha = dominant_root(k, precision);
  ctx.g = binet_coefficient(k, ctx.alpha);
  ctx.log_alpha = log(ctx.alpha);
  const long bits = ctx.alpha.precision();
  if (!num::certified_lt(Ball::from_rational(root_lower_bracket(k), bits), ctx.alpha) ||
      !num::certified_lt(ctx.alpha, Ball::exact(2, bits)))
    throw PrecisionExhausted("alpha escaped its bracket");
  return ctx;
}

mpq_class g_norm(int k) {
  if (k < 2) throw DomainError("g_norm needs k >= 2");
  mpz_class a, b, c;
  mpz_ui_pow_ui(a.get_mpz_t(), 2, static_cast<unsigned long>(k + 1));
  mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(k));
  mpz_ui_pow_ui(c.get_mpz_t(), static_cast<unsigned long>(k + 1), static_cast<unsigned long>(k + 1));
  mpq_class out(mpz_class((k - 1) * (k - 1)), a * b - c);
  out.canonicalize();
  return out;
}

Ball binet_error(const KFibContext& ctx, long n, const mpz_class& fn) {
  return Ball::from_integer(fn, ctx.alpha.precision()) - ctx.g * pow(ctx.alpha, n - 1);
}

bool size_bounds_hold(const KFibContext& ctx, long n, const mpz_class& fn) {
  Ball f = Ball::from_integer(fn, ctx.alpha.precision());
  return num::certified_le(pow(ctx.alpha, n - 2), f) && num::certified_le(f, pow(ctx.alpha, n - 1));
}

}  // namespace kfib
