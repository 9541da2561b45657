#include <random>

#include "doctest.h"
#include "kfib/reduction.hpp"

using kfib::num::Ball;
namespace num = kfib::num;

namespace {

num::BallSource surd(long p, long d, long q) {
  return [=](long bits) { return (Ball::exact(p, bits) + sqrt(Ball::exact(d, bits))) / q; };
}

bool is_square(long d) {
  long s = 0;
  while (s * s < d) ++s;
  return s * s == d;
}

/* Scans every u in (from, M]: returns the first u with |u gamma - v + mu| < A B^-u, or 0. */
long first_violation(const kfib::ReductionInstance& inst, long from, long bits = 256) {
  const Ball g = inst.gamma(bits), mu = inst.mu(bits);
  const Ball b_inv = 1 / inst.B(bits);
  const long M = inst.M.get_si();
  const long u0 = std::max(from + 1, 1L);
  Ball x = u0 * g + mu;
  Ball rhs = Ball::from_rational(inst.A, bits) * pow(b_inv, u0);
  for (long u = u0; u <= M; ++u) {
    const mpz_class v = num::certified_round(x);
    const Ball lhs = abs(x - Ball::from_integer(v, bits));
    if (!num::certified_lt(rhs, lhs)) return u;
    x = x + g;
    rhs = rhs * b_inv;
  }
  return 0;
}

}  // namespace

TEST_CASE("pipeline constants A and B") {
  CHECK(kfib::dp_default_A() == mpq_class(301, 100));
  const Ball b = kfib::dp_base_source()(256);
  CHECK(b.overlaps(exp(log(Ball::from_decimal("2.3")) / 1457)));
  // 3 * 2.3^-x with x >= (n - 1)/1457 is at most 3 * 2.3^(1/1457) * B^-n
  CHECK(num::certified_lt(3 * b, Ball::from_rational(kfib::dp_default_A())));
}

TEST_CASE("soundness against brute force on 10^2 quadratic-irrational instances") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> pd(-5, 5), dd(2, 200), qd(1, 9), md(100, 10000);
  int solved = 0, attempts = 0;
  while (solved < 100) {
    REQUIRE(++attempts < 1000);
    const long d1 = dd(rng), d2 = dd(rng);
    if (is_square(d1) || is_square(d2) || d1 == d2) continue;
    kfib::ReductionInstance inst;
    inst.gamma = surd(pd(rng), d1, qd(rng));
    inst.mu = surd(pd(rng), d2, qd(rng));
    inst.A = mpq_class(qd(rng) + 1, 2);
    inst.B = [](long bits) { return Ball::exact(2, bits); };
    inst.M = md(rng);
    kfib::ReductionOptions o;
    o.index_cap = 60;
    kfib::ReductionOutcome r;
    try {
      r = kfib::dp_reduce_cell(inst, 0, o);
    } catch (const kfib::NoPositiveEpsilon&) {
      continue;
    }
    ++solved;
    CHECK(r.q > 6 * inst.M);
    CHECK(r.epsilon.certainly_positive());
    INFO("u_bound " << r.u_bound << " M " << inst.M);
    REQUIRE(first_violation(inst, r.u_bound.get_si()) == 0);
  }
}

TEST_CASE("desk cell (k, m) = (3, 3) with M = 10^6") {
  kfib::ReductionInstance inst = kfib::grid_instance(3, 3, 1000000);
  kfib::ReductionOutcome r = kfib::dp_reduce_cell(inst, 0);
  CHECK(r.q > 6000000);
  CHECK(r.epsilon.certainly_positive());
  CHECK(r.u_bound < 1000000);
  CHECK(first_violation(inst, r.u_bound.get_si()) == 0);
}

TEST_CASE("tiny M takes the first convergent past 6") {
  kfib::ReductionInstance inst = kfib::grid_instance(3, 5, 1);
  kfib::ReductionOutcome r = kfib::dp_reduce_cell(inst, 0);
  CHECK(r.q > 6);
  CHECK(r.epsilon.certainly_positive());
}

TEST_CASE("fixed index 700 on the grid corner") {
  const mpz_class M = num::parse_decimal("2.64e35").get_num();
  kfib::ReductionOptions o;
  o.fixed_index = true;
  kfib::ReductionOutcome r = kfib::dp_reduce_cell(kfib::grid_instance(3, 3, M), 700, o);
  CHECK(r.convergent_index == 700);
  CHECK(num::certified_lt(Ball::from_decimal("5.29e-214"), r.epsilon));
  CHECK(r.q < num::parse_decimal("2.1e425").get_num());

  // more bits never flip the sign of a certified eps
  kfib::ReductionOptions wide = o;
  wide.policy.initial_bits = 2 * r.bits;
  kfib::ReductionOutcome r2 = kfib::dp_reduce_cell(kfib::grid_instance(3, 3, M), 700, wide);
  CHECK(r2.epsilon.certainly_positive());
  CHECK(r2.epsilon.overlaps(r.epsilon));
  CHECK(r2.u_bound == r.u_bound);
}

TEST_CASE("grid skips cells with k > m") {
  auto g = kfib::dp_reduce_cells({3, 10}, {3, 5}, 1000, 0);
  CHECK(g.skipped == 2);
  CHECK(g.cells.size() == 2);
  CHECK(g.failures == 0);
  auto h = kfib::dp_reduce_grid({3, 4}, {3, 4}, 1000, 0);
  CHECK(h.skipped == 1);
  CHECK(h.cells.size() == 3);
}

TEST_CASE("invalid instances") {
  kfib::ReductionInstance inst = kfib::grid_instance(3, 3, 0);
  CHECK_THROWS_AS(kfib::dp_reduce_cell(inst, 0), kfib::InvalidInstance);
  inst = kfib::grid_instance(3, 3, 100);
  inst.B = [](long bits) { return Ball::exact(1, bits); };
  CHECK_THROWS_AS(kfib::dp_reduce_cell(inst, 0), kfib::InvalidInstance);
  // gamma rational: every eps is the same sign-undecidable or negative, so nothing is found
  kfib::ReductionInstance flat;
  flat.gamma = [](long bits) { return Ball::from_rational(mpq_class(1, 2), bits); };
  flat.mu = [](long bits) { return Ball::from_rational(mpq_class(1, 4), bits); };
  flat.A = 1;
  flat.B = [](long bits) { return Ball::exact(2, bits); };
  flat.M = 10;
  kfib::ReductionOptions o;
  o.index_cap = 5;
  o.policy.max_bits = 1024;
  CHECK_THROWS(kfib::dp_reduce_cell(flat, 0, o));
}
