#include "kfib/contfrac.hpp"

#include <algorithm>

#include "kfib/parallel.hpp"
#include "kfib/roots.hpp"

namespace kfib {

using num::Ball;

std::vector<mpz_class> certified_quotients(const Ball& tau, long limit) {
  mpq_class lo = tau.lower_q(), hi = tau.upper_q();
  mpz_class xn = lo.get_num(), xd = lo.get_den();
  mpz_class yn = hi.get_num(), yd = hi.get_den();
  std::vector<mpz_class> out;
  mpz_class a, b, rx, ry;
  while (static_cast<long>(out.size()) < limit) {
    mpz_fdiv_qr(a.get_mpz_t(), rx.get_mpz_t(), xn.get_mpz_t(), xd.get_mpz_t());
    mpz_fdiv_qr(b.get_mpz_t(), ry.get_mpz_t(), yn.get_mpz_t(), yd.get_mpz_t());
    if (a != b) break;
    out.push_back(a);
    // an endpoint sitting on the integer itself leaves the next quotient open
    if (rx == 0 || ry == 0) break;
    xn.swap(xd);
    xd = rx;
    yn.swap(yd);
    yd = ry;
  }
  return out;
}

std::vector<Convergent> convergents_from_quotients(const std::vector<mpz_class>& a) {
  std::vector<Convergent> out;
  out.reserve(a.size());
  mpz_class p2 = 0, p1 = 1, q2 = 1, q1 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mpz_class p = a[i] * p1 + p2;
    mpz_class q = a[i] * q1 + q2;
    out.push_back({static_cast<long>(i), a[i], p, q});
    p2 = std::move(p1);
    p1 = p;
    q2 = std::move(q1);
    q1 = q;
  }
  return out;
}

std::vector<Convergent> cf_expand(const num::BallSource& tau, long count, const num::PrecisionPolicy& policy,
                                  long* bits_used) {
  if (count < 1) throw DomainError("cf_expand needs count >= 1");
  policy.validate();
  for (long bits = policy.initial_bits;;) {
    std::vector<mpz_class> a = certified_quotients(tau(bits), count);
    const long got = static_cast<long>(a.size());
    if (got >= count) {
      if (bits_used) *bits_used = bits;
      return convergents_from_quotients(a);
    }
    if (bits >= policy.max_bits)
      throw PrecisionExhausted("only " + std::to_string(got) + " of " + std::to_string(count) +
                               " partial quotients certified at " + std::to_string(bits) + " bits");
    long next = policy.next(bits);
    if (got >= 8) next = std::max(next, bits / got * count * 5 / 4);  // quotients scale with bits
    bits = std::min(next, policy.max_bits);
  }
}

LegendreResult legendre_bound(const num::BallSource& tau, const mpz_class& M, const num::PrecisionPolicy& policy) {
  if (M <= 0) throw DomainError("legendre_bound needs M > 0");
  for (long count = 16;; count *= 2) {
    std::vector<Convergent> c = cf_expand(tau, count, policy);
    for (const Convergent& cv : c) {
      if (cv.q > M) {
        LegendreResult r;
        r.N = cv.index;
        r.q_N = cv.q;
        r.a_max = c[0].a;
        for (long i = 0; i <= cv.index; ++i) r.a_max = std::max(r.a_max, c[static_cast<std::size_t>(i)].a);
        return r;
      }
    }
  }
}

num::BallSource beta_source(int k) {
  return [k](long bits) {
    KFibContext ctx = KFibContext::build(k, bits);
    return log(1 / ctx.g) / ctx.log_alpha;
  };
}

LegendreScan legendre_scan(int k_lo, int k_hi, long terms, const num::PrecisionPolicy& policy) {
  if (k_lo < 2 || k_hi < k_lo) throw DomainError("legendre_scan needs 2 <= k_lo <= k_hi");
  if (terms < 2) throw DomainError("legendre_scan needs at least two terms");
  LegendreScan scan;
  scan.rows.resize(static_cast<std::size_t>(k_hi - k_lo + 1));
  parallel_for(scan.rows.size(), [&](std::size_t i) {
    LegendreScanRow& row = scan.rows[i];
    row.k = k_lo + static_cast<int>(i);
    std::vector<Convergent> c = cf_expand(beta_source(row.k), terms, policy, &row.bits_used);
    row.q_check = c[static_cast<std::size_t>(terms - 2)].q;
    row.a_max = c[0].a;
    for (const Convergent& cv : c)
      if (cv.a > row.a_max) {
        row.a_max = cv.a;
        row.a_max_index = cv.index;
      }
  });
  scan.min_q = scan.rows.front().q_check;
  scan.max_a = scan.rows.front().a_max;
  scan.argmin_q_k = scan.argmax_a_k = k_lo;
  for (const auto& row : scan.rows) {
    if (row.q_check < scan.min_q) {
      scan.min_q = row.q_check;
      scan.argmin_q_k = row.k;
    }
    if (row.a_max > scan.max_a) {
      scan.max_a = row.a_max;
      scan.argmax_a_k = row.k;
    }
  }
  return scan;
}

}  // namespace kfib
