#pragma once

// Certified continued fractions of irrational ball values.
//
// Quotients come from a lockstep Euclid run on both exact endpoints of the
// ball; a quotient is accepted only when every point of the ball shares it.
// Index 0 is a_0, with p_0/q_0 = a_0/1.

#include <gmpxx.h>

#include <vector>

#include "kfib/ball.hpp"

namespace kfib {

struct Convergent {
  long index = 0;
  mpz_class a;
  mpz_class p;
  mpz_class q;
};

/* Quotients shared by every point of [lower, upper], at most `limit`. */
std::vector<mpz_class> certified_quotients(const num::Ball& tau, long limit);

/* First `count` convergents; the source is re-evaluated at escalating
 * precision until all of them are certified. */
std::vector<Convergent> cf_expand(const num::BallSource& tau, long count, const num::PrecisionPolicy& policy = {},
                                  long* bits_used = nullptr);
std::vector<Convergent> convergents_from_quotients(const std::vector<mpz_class>& a);

struct LegendreResult {
  long N = 0;         // smallest index with q_N > M
  mpz_class a_max;    // max a_i, 0 <= i <= N
  mpz_class q_N;
};

LegendreResult legendre_bound(const num::BallSource& tau, const mpz_class& M, const num::PrecisionPolicy& policy = {});

/* beta_k = log(1/g) / log alpha. */
num::BallSource beta_source(int k);

struct LegendreScanRow {
  int k = 0;
  mpz_class q_check;   // q at index terms - 2
  mpz_class a_max;     // over all expanded indices
  long a_max_index = 0;
  long bits_used = 0;
};

struct LegendreScan {
  std::vector<LegendreScanRow> rows;  // ordered by k
  int argmin_q_k = 0;
  int argmax_a_k = 0;
  mpz_class min_q;
  mpz_class max_a;
};

/* Expands beta_k to `terms` quotients (indices 0..terms-1) for every k in
 * [k_lo, k_hi], in parallel. */
LegendreScan legendre_scan(int k_lo, int k_hi, long terms, const num::PrecisionPolicy& policy);

}  // namespace kfib
