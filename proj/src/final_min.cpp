#include "kfib/final_min.hpp"

#include <vector>

#include "kfib/parallel.hpp"
#include "kfib/roots.hpp"
#include "kfib/search.hpp"

namespace kfib {

using num::Ball;

const char* to_string(DenominatorVariant v) { return v == DenominatorVariant::ExpX ? "exp_x" : "exp_2x"; }

DenominatorVariant variant_from_string(const std::string& name) {
  if (name == "exp_x" || name == "x") return DenominatorVariant::ExpX;
  if (name == "exp_2x" || name == "2x") return DenominatorVariant::Exp2X;
  throw ConfigInvalid("unknown denominator variant '" + name + "'");
}

namespace {

Ball value_in(const KFibContext& ctx, long x, long t, DenominatorVariant v) {
  const long e = v == DenominatorVariant::ExpX ? x : 2 * x;
  return abs(pow(ctx.alpha, -t) * pow(ctx.g, 1 - x) / (1 + pow(ctx.alpha, -e)) - 1);
}

}  // namespace

Ball final_min_value(int k, long x, long t, DenominatorVariant v, long bits) {
  return value_in(KFibContext::build(k, bits), x, t, v);
}

long m_bound_from_minimum(const Ball& minimum, long bits) {
  mpq_class lo = minimum.lower_q();
  if (lo <= 0) throw PrecisionExhausted("minimum not certified positive");
  Ball bound = 2 + 2 * log(Ball::from_decimal("2.11", bits) / Ball::from_rational(lo, bits)) /
                       log(Ball::from_decimal("1.75", bits));
  return num::certified_floor(bound).get_si();
}

FinalMinResult final_min_scan(IntRange x_range, IntRange k_range, DenominatorVariant v, long bits) {
  if (x_range.lo < 2 || x_range.lo > x_range.hi) throw DomainError("final_min_scan needs 2 <= x_lo <= x_hi");
  if (k_range.lo < 2 || k_range.lo > k_range.hi) throw DomainError("final_min_scan needs 2 <= k_lo <= k_hi");
  const std::size_t nk = static_cast<std::size_t>(k_range.hi - k_range.lo + 1);
  std::vector<FinalMinResult> per(nk);
  std::vector<mpq_class> best_mid(nk);
  parallel_for(nk, [&](std::size_t i) {
    const int k = static_cast<int>(k_range.lo) + static_cast<int>(i);
    KFibContext ctx = KFibContext::build(k, bits);
    FinalMinResult& r = per[i];
    r.variant = v;
    bool first = true;
    mpq_class best;
    for (long x = x_range.lo; x <= x_range.hi; ++x) {
      TInterval ti = t_interval(x);
      for (long t = ti.first; t <= ti.last; ++t) {
        Ball val = value_in(ctx, x, t, v);
        ++r.cells;
        mpq_class mid = val.mid_q();
        if (first || mid < best) {
          best = mid;
          r.k = k;
          r.x = x;
          r.t = t;
        }
        r.minimum = first ? val : min(r.minimum, val);
        first = false;
      }
    }
    best_mid[i] = best;
  });
  FinalMinResult out = per[0];
  mpq_class best = best_mid[0];
  for (std::size_t i = 1; i < nk; ++i) {
    out.cells += per[i].cells;
    if (best_mid[i] < best) {
      best = best_mid[i];
      out.k = per[i].k;
      out.x = per[i].x;
      out.t = per[i].t;
    }
    out.minimum = min(out.minimum, per[i].minimum);
  }
  if (!out.minimum.certainly_positive()) throw PrecisionExhausted("final minimum not certified positive");
  out.m_bound = m_bound_from_minimum(out.minimum, bits);
  return out;
}

}  // namespace kfib
