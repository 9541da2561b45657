#include "kfib/reduction.hpp"

#include <algorithm>
#include <mutex>

#include "kfib/contfrac.hpp"
#include "kfib/parallel.hpp"
#include "kfib/roots.hpp"
#include "kfib/sequence.hpp"

namespace kfib {

using num::Ball;

mpq_class dp_default_A() { return mpq_class(301, 100); }

num::BallSource dp_base_source() {
  return [](long bits) { return pow(Ball::from_decimal("2.3", bits), Ball::from_rational(mpq_class(1, 1457), bits)); };
}

namespace {

/* gamma and mu share one context per precision. */
struct CellCache {
  int k;
  mpz_class f;  // F_{m+1}
  std::mutex mu;
  long bits = 0;
  Ball gamma, mu_value;

  void refresh(long b) {
    if (b == bits) return;
    KFibContext ctx = KFibContext::build(k, b);
    Ball log_f = log(Ball::from_integer(f, ctx.alpha.precision()));
    gamma = ctx.log_alpha / log_f;
    mu_value = -log(ctx.alpha / ctx.g) / log_f;
    bits = b;
  }
};

}  // namespace

ReductionInstance grid_instance(int k, long m, const mpz_class& M) {
  if (k < 2 || m < 2) throw DomainError("grid_instance needs k >= 2 and m >= 2");
  auto cache = std::make_shared<CellCache>();
  cache->k = k;
  cache->f = kfib_at(k, m + 1);
  ReductionInstance inst;
  inst.k = k;
  inst.m = m;
  inst.gamma = [cache](long bits) {
    std::lock_guard<std::mutex> lock(cache->mu);
    cache->refresh(bits);
    return cache->gamma;
  };
  inst.mu = [cache](long bits) {
    std::lock_guard<std::mutex> lock(cache->mu);
    cache->refresh(bits);
    return cache->mu_value;
  };
  inst.A = dp_default_A();
  inst.B = dp_base_source();
  inst.M = M;
  return inst;
}

ReductionOutcome dp_reduce_cell(const ReductionInstance& inst, long start_index, const ReductionOptions& options) {
  if (inst.M <= 0) throw InvalidInstance("reduction needs M > 0");
  if (inst.A <= 0) throw InvalidInstance("reduction needs A > 0");
  if (start_index < 0) throw DomainError("start index must be non-negative");
  options.policy.validate();

  ReductionOutcome out;
  out.k = inst.k;
  out.m = inst.m;
  const mpz_class six_m = 6 * inst.M;
  const long cap = options.fixed_index ? start_index : std::max(start_index, options.index_cap);
  // a_t costs ~2 log2(q_t)/t bits; for the grid q_700 ~ 1e425, so ~6 bits per index
  long bits = std::max(options.policy.initial_bits, 6 * start_index + 512);
  bits = std::min(bits, options.policy.max_bits);
  long t = start_index;

  for (;;) {
    bool escalate = false;
    Ball gamma = inst.gamma(bits);
    std::vector<mpz_class> a = certified_quotients(gamma, cap + 1);
    std::vector<Convergent> conv = convergents_from_quotients(a);
    Ball mu = inst.mu(bits);
    for (; t <= cap; ++t) {
      if (t >= static_cast<long>(conv.size())) {
        escalate = true;
        break;
      }
      const Convergent& c = conv[static_cast<std::size_t>(t)];
      if (c.q <= six_m) continue;
      Ball eps(bits), dmu(bits), dgamma(bits);
      try {
        dmu = num::distance_to_nearest_integer(c.q * mu);
        dgamma = num::distance_to_nearest_integer(c.q * gamma);
        eps = dmu - Ball::from_integer(inst.M, bits) * dgamma;
      } catch (const PrecisionExhausted&) {
        escalate = true;
        break;
      }
      if (eps.certainly_positive()) {
        Ball b = inst.B(bits);
        if (!(b - 1).certainly_positive()) throw InvalidInstance("reduction needs B > 1");
        Ball bound = log(Ball::from_rational(inst.A, bits) * Ball::from_integer(c.q, bits) / eps) / log(b);
        try {
          out.u_bound = num::certified_floor(bound);
        } catch (const PrecisionExhausted&) {
          escalate = true;
          break;
        }
        out.convergent_index = t;
        out.q = c.q;
        out.epsilon = eps;
        out.mu_distance = dmu;
        out.gamma_distance = dgamma;
        out.bits = bits;
        return out;
      }
      if (!eps.certainly_negative()) {
        escalate = true;
        break;
      }
      out.rejected_indices.push_back(t);
    }
    if (!escalate)
      throw NoPositiveEpsilon("no convergent index in [" + std::to_string(start_index) + ", " + std::to_string(cap) +
                              "] gives eps > 0 for (k, m) = (" + std::to_string(inst.k) + ", " +
                              std::to_string(inst.m) + ")");
    if (bits >= options.policy.max_bits)
      throw PrecisionExhausted("reduction cell (k, m) = (" + std::to_string(inst.k) + ", " + std::to_string(inst.m) +
                               ") undecided at " + std::to_string(bits) + " bits");
    bits = options.policy.next(bits);
  }
}

namespace {

GridReport run_cells(std::vector<GridCell> cells, long skipped, const mpz_class& M, long index,
                     const ReductionOptions& options) {
  GridReport report;
  report.skipped = skipped;
  parallel_for(cells.size(), [&](std::size_t i) {
    GridCell& cell = cells[i];
    try {
      cell.outcome = dp_reduce_cell(grid_instance(cell.k, cell.m, M), index, options);
    } catch (const Error& e) {
      cell.error = e.what();
    }
  });
  for (const GridCell& cell : cells) {
    if (!cell.outcome) {
      ++report.failures;
      continue;
    }
    const ReductionOutcome& o = *cell.outcome;
    if (report.min_q == 0 || o.q < report.min_q) report.min_q = o.q;
    if (o.q > report.max_q) report.max_q = o.q;
    if (o.u_bound > report.max_u_bound) report.max_u_bound = o.u_bound;
    if (!report.min_epsilon || o.epsilon.lower_q() < report.min_epsilon->lower_q()) report.min_epsilon = o.epsilon;
  }
  report.cells = std::move(cells);
  return report;
}

}  // namespace

GridReport dp_reduce_grid(IntRange m_range, IntRange k_range, const mpz_class& M, long index,
                          const ReductionOptions& options, const std::function<bool(int, long)>& keep) {
  if (m_range.lo > m_range.hi || k_range.lo > k_range.hi) throw DomainError("reduction grid ranges must be nonempty");
  std::vector<GridCell> cells;
  long skipped = 0;
  for (long m = m_range.lo; m <= m_range.hi; ++m)
    for (long k = k_range.lo; k <= k_range.hi; ++k) {
      if (k > m) {
        ++skipped;
        continue;
      }
      if (keep && !keep(static_cast<int>(k), m)) continue;
      cells.push_back({static_cast<int>(k), m, std::nullopt, {}});
    }
  return run_cells(std::move(cells), skipped, M, index, options);
}

GridReport dp_reduce_cells(const std::vector<int>& ks, const std::vector<long>& ms, const mpz_class& M, long index,
                           const ReductionOptions& options) {
  std::vector<GridCell> cells;
  long skipped = 0;
  for (long m : ms)
    for (int k : ks) {
      if (k > m) {
        ++skipped;
        continue;
      }
      cells.push_back({k, m, std::nullopt, {}});
    }
  return run_cells(std::move(cells), skipped, M, index, options);
}

}  // namespace kfib
