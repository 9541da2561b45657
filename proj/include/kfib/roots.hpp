#pragma once

#include <gmpxx.h>

#include "kfib/ball.hpp"

namespace kfib {

/* Certified data for one order k: the dominant root alpha of
 * x^k - x^(k-1) - ... - 1 and the Binet coefficient
 * g = (alpha - 1) / (2 + (k + 1)(alpha - 2)). Immutable once built. */
struct KFibContext {
  int k = 0;
  long precision = 0;
  num::Ball alpha;
  num::Ball g;
  num::Ball log_alpha;

  static KFibContext build(int k, long precision);
};

/* Psi_k(x) = x^k - x^(k-1) - ... - 1 by Horner's rule. */
num::Ball psi(int k, const num::Ball& x);

/* Ball around alpha(k) with radius <= 2^-precision, certified by the sign
 * change of Psi_k across its ends inside (2(1 - 2^-k), 2). */
num::Ball dominant_root(int k, long precision);
/* 2(1 - 2^-k), the lower end of the root bracket. */
mpq_class root_lower_bracket(int k);

num::Ball binet_coefficient(int k, const num::Ball& alpha);
inline num::Ball binet_coefficient(const KFibContext& ctx) { return binet_coefficient(ctx.k, ctx.alpha); }

/* |N(g)| = (k-1)^2 / (2^(k+1) k^k - (k+1)^(k+1)), reduced. */
mpq_class g_norm(int k);

/* F_n - g alpha^(n-1); Dresden's bound says |.| < 1/2. */
num::Ball binet_error(const KFibContext& ctx, long n, const mpz_class& fn);
/* alpha^(n-2) <= F_n <= alpha^(n-1) via certified comparisons; false only if
 * a comparison is certified to fail. */
bool size_bounds_hold(const KFibContext& ctx, long n, const mpz_class& fn);

}  // namespace kfib
