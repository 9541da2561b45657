#pragma once

// Terminal minimisation for the large-m case:
//   min |alpha^-t g^(1-x) / (1 + alpha^-e) - 1|  over x, k and t in t_interval(x),
// with e = x or e = 2x, and the bound on m it implies.

#include <gmpxx.h>

#include <string>

#include "kfib/ball.hpp"
#include "kfib/bound_chain.hpp"

namespace kfib {

enum class DenominatorVariant { ExpX, Exp2X };

const char* to_string(DenominatorVariant v);
DenominatorVariant variant_from_string(const std::string& name);

struct FinalMinResult {
  DenominatorVariant variant = DenominatorVariant::ExpX;
  num::Ball minimum;
  int k = 0;
  long x = 0;
  long t = 0;
  long cells = 0;
  long m_bound = 0;  // largest m with 2.11 (7/4)^(-(m-2)/2) > minimum
};

num::Ball final_min_value(int k, long x, long t, DenominatorVariant v, long bits);
FinalMinResult final_min_scan(IntRange x_range, IntRange k_range, DenominatorVariant v, long bits = 256);
/* floor(2 + 2 log(2.11 / lower) / log(7/4)) with lower the certified lower end of `minimum`. */
long m_bound_from_minimum(const num::Ball& minimum, long bits = 256);

}  // namespace kfib
