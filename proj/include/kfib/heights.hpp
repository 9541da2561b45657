#pragma once

// Logarithmic heights and the lower-bound engines for linear forms in
// logarithms (Matveev, Laurent-Mignotte-Nesterenko) plus the Sanchez-Luca
// absorption lemma a/(log a)^r < T  =>  a < 2^r T (log T)^r.

#include <gmpxx.h>

#include <vector>

#include "kfib/ball.hpp"
#include "kfib/roots.hpp"

namespace kfib {

struct HeightConstants {
  num::Ball h_alpha;    // (log alpha) / k; alpha is a unit, other conjugates inside the unit circle
  num::Ball h_g_bound;  // 3 log k
  num::Ball h_F;        // log F_{m+1}
};

HeightConstants log_height_constants(const KFibContext& ctx, long m);

/* h(eta) from the minimal polynomial a_0 X^d + ... + a_d (leading first).
 * Supports 1 <= d <= 3; the polynomial must be squarefree. */
num::Ball log_height_from_minpoly(std::vector<mpz_class> coeffs, long bits);

/* Lambda = gamma_1^b_1 ... gamma_t^b_t - 1 in a field of degree D. */
struct LinearFormInstance {
  int degree = 1;
  std::vector<mpz_class> coefficients;  // b_i
  std::vector<num::Ball> heights;       // A_i >= max{D h, |log gamma|, 0.16}
  num::Ball B;                          // B >= max |b_i|
};

/* E with |Lambda| >= exp(-E). */
num::Ball matveev_exponent(const LinearFormInstance& inst);

enum class LmnBranch { LogBPrime, TwentyOneOverD, Half, Undecided };

struct LmnBound {
  num::Ball exponent;  // E with log|Gamma| > -E
  LmnBranch branch;
};

LmnBound lmn_exponent(int degree, const num::Ball& log_b1, const num::Ball& log_b2, const num::Ball& b_prime);

/* 2^r T (log T)^r; requires T > (4 r^2)^r. */
num::Ball sl_absorb(int r, const num::Ball& T);

}  // namespace kfib
