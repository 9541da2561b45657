#include <cmath>
#include <random>

#include "doctest.h"
#include "kfib/heights.hpp"
#include "kfib/roots.hpp"
#include "kfib/sequence.hpp"

using kfib::num::Ball;
namespace num = kfib::num;

namespace {

Ball dec(const char* s, long bits = 256) { return Ball::from_decimal(s, bits); }
Ball n(long v, long bits = 256) { return Ball::exact(v, bits); }

kfib::LinearFormInstance three_term(int k, long m, long x) {
  const Ball lk = log(n(k));
  kfib::LinearFormInstance inst;
  inst.degree = k;
  inst.coefficients = {x, mpz_class(m * x + 1) - 1, 1};  // |b_i| <= n - 1 with n = mx + 1
  inst.heights = {dec("0.7") * k * m, dec("0.7"), 3 * k * lk};
  inst.B = n(m * x);
  return inst;
}

}  // namespace

TEST_CASE("height constants") {
  kfib::KFibContext c2 = kfib::KFibContext::build(2, 256);
  auto h2 = kfib::log_height_constants(c2, 5);
  CHECK(std::abs(h2.h_alpha.to_double() - 0.2406059125) < 1e-9);

  kfib::KFibContext c3 = kfib::KFibContext::build(3, 256);
  auto h3 = kfib::log_height_constants(c3, 3);
  CHECK(h3.h_g_bound.overlaps(3 * log(n(3))));
  for (long m = 3; m <= 60; ++m) {
    auto h = kfib::log_height_constants(c3, m);
    CHECK(h.h_F.overlaps(log(Ball::from_integer(kfib::kfib_at(3, m + 1)))));
    CHECK(num::certified_le(h.h_F, m * c3.log_alpha));
    CHECK(num::certified_lt(h.h_F, dec("0.7") * m));
  }
  CHECK_THROWS_AS(kfib::log_height_constants(c3, 2), kfib::DomainError);
}

TEST_CASE("heights from minimal polynomials") {
  const Ball golden = log((1 + sqrt(n(5))) / 2) / 2;
  CHECK(kfib::log_height_from_minpoly({1, -1, -1}, 256).overlaps(golden));
  CHECK(kfib::log_height_from_minpoly({1, -2}, 256).overlaps(log(n(2))));
  CHECK(kfib::log_height_from_minpoly({2, -1}, 256).overlaps(log(n(2))));
  CHECK(kfib::log_height_from_minpoly({1, 0, -2}, 256).overlaps(log(n(2)) / 2));
  CHECK(kfib::log_height_from_minpoly({1, 0, 1}, 256).contains(mpq_class(0)));
  kfib::KFibContext c3 = kfib::KFibContext::build(3, 256);
  CHECK(kfib::log_height_from_minpoly({1, -1, -1, -1}, 256).overlaps(c3.log_alpha / 3));
  // 2x^3 - 1: every root inside the unit circle, so only the leading coefficient counts
  CHECK(kfib::log_height_from_minpoly({2, 0, 0, -1}, 256).overlaps(log(n(2)) / 3));
}

TEST_CASE("Matveev exponent") {
  kfib::LinearFormInstance small;
  small.degree = 1;
  small.coefficients = {1, -1};
  small.heights = {dec("0.16"), dec("0.16")};
  small.B = n(1);
  const Ball expect = dec("1.4") * pow(n(30), 5) * pow(n(2), 4) * sqrt(n(2)) * dec("0.0256");
  CHECK(kfib::matveev_exponent(small).overlaps(expect));

  auto doubled = small;
  doubled.heights[1] = dec("0.32");
  CHECK(kfib::matveev_exponent(doubled).overlaps(2 * expect));

  auto low = small;
  low.heights[0] = dec("0.15");
  CHECK_THROWS_AS(kfib::matveev_exponent(low), kfib::InvalidInstance);
  auto short_b = small;
  short_b.coefficients = {3, 1};
  CHECK_THROWS_AS(kfib::matveev_exponent(short_b), kfib::InvalidInstance);
}

TEST_CASE("Matveev exponents are monotone in each height") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> kd(3, 200);
  std::uniform_int_distribution<long> md(3, 5000), xd(2, 1000000);
  std::uniform_int_distribution<int> bump(1, 1000);
  for (int i = 0; i < 200; ++i) {
    auto inst = three_term(kd(rng), md(rng), xd(rng));
    const Ball e0 = kfib::matveev_exponent(inst);
    for (std::size_t j = 0; j < 3; ++j) {
      auto up = inst;
      up.heights[j] = up.heights[j] * Ball::from_rational(mpq_class(1000 + bump(rng), 1000));
      REQUIRE(num::certified_lt(e0, kfib::matveev_exponent(up)));
    }
  }
}

TEST_CASE("three-term instantiation gives the first x bound") {
  // x log(7/4) < log 3 + E  must sit under 1.04e12 m k^4 (log k)^2 log(mx + 1)
  for (int k : {3, 4, 10, 74, 242})
    for (long m : {static_cast<long>(k), 100L, 1457L, 100000L})
      for (long x : {2L, 21L, 1000L, 1000000000L}) {
        if (m < k) continue;
        const Ball e = kfib::matveev_exponent(three_term(k, m, x));
        const Ball lhs = (log(n(3)) + e) / log(dec("1.75"));
        const Ball lk = log(n(k));
        const Ball rhs = dec("1.04e12") * m * pow(n(k), 4) * lk * lk * log(n(m * x + 1));
        INFO("k=" << k << " m=" << m << " x=" << x);
        REQUIRE(num::certified_lt(lhs, rhs));
      }
}

TEST_CASE("two-logarithm exponent") {
  auto b = kfib::lmn_exponent(1, n(1), n(1), n(1));
  CHECK(b.exponent.overlaps(dec("24.34") * 441));
  CHECK(b.branch == kfib::LmnBranch::TwentyOneOverD);
  CHECK(kfib::lmn_exponent(3, n(1), n(1), dec("2.4")).branch == kfib::LmnBranch::TwentyOneOverD);
  CHECK(kfib::lmn_exponent(100, n(1), n(1), n(1)).branch == kfib::LmnBranch::Half);
  CHECK(kfib::lmn_exponent(100, n(1), n(1), n(1000)).branch == kfib::LmnBranch::LogBPrime);
  CHECK_THROWS_AS(kfib::lmn_exponent(3, n(0), n(1), n(1)), kfib::InvalidInstance);

  // log B1 = 4 log k, log B2 = 1/k, b' < 1.2x reproduces 97.4 k^3 log k max{log(1.4x), 21/k, 1/2}^2
  for (int k : {3, 7, 21, 50, 242})
    for (long x : {2L, 20L, 500L, 1000000L}) {
      const Ball lk = log(n(k));
      auto lmn = kfib::lmn_exponent(k, 4 * lk, Ball::from_rational(mpq_class(1, k)), dec("1.2") * x);
      Ball h = max(max(log(dec("1.4") * x), Ball::from_rational(mpq_class(21, k))), dec("0.5"));
      const Ball rhs = dec("97.4") * pow(n(k), 3) * lk * h * h;
      REQUIRE(num::certified_le(lmn.exponent, rhs));
    }
}

TEST_CASE("two-logarithm exponent is monotone") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dd(1, 300), num_d(1, 100000);
  for (int i = 0; i < 200; ++i) {
    const int d = dd(rng);
    const Ball b1 = Ball::from_rational(mpq_class(num_d(rng), 100)), b2 = Ball::from_rational(mpq_class(num_d(rng), 100));
    const Ball bp = Ball::from_rational(mpq_class(num_d(rng), 10));
    const Ball e0 = kfib::lmn_exponent(d, b1, b2, bp).exponent;
    const Ball f = Ball::from_rational(mpq_class(11, 10));
    REQUIRE(num::certified_lt(e0, kfib::lmn_exponent(d, b1 * f, b2, bp).exponent));
    REQUIRE(num::certified_lt(e0, kfib::lmn_exponent(d, b1, b2 * f, bp).exponent));
    // flat while another branch of the max wins
    const Ball e3 = kfib::lmn_exponent(d, b1, b2, bp * f).exponent;
    REQUIRE_FALSE(e3.upper_q() < e0.lower_q());
  }
}

TEST_CASE("absorption lemma") {
  CHECK(std::abs(kfib::sl_absorb(1, n(100)).to_double() - 921.034037) < 1e-5);
  CHECK_THROWS_AS(kfib::sl_absorb(1, n(4)), kfib::InvalidInstance);
  CHECK_THROWS_AS(kfib::sl_absorb(2, n(256)), kfib::InvalidInstance);
  CHECK_NOTHROW(kfib::sl_absorb(2, n(257)));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> expo(1.0, 60.0);
  int used = 0;
  for (int i = 0; i < 1000; ++i) {
    const int r = 1 + i % 2;
    const Ball a = exp(Ball::from_rational(mpq_class(expo(rng)), 256));
    const Ball T = a / pow(log(a), r) * dec("1.01");
    if (!(T.lower_q() > mpq_class(r == 1 ? 4 : 256))) continue;
    ++used;
    REQUIRE(num::certified_lt(a, kfib::sl_absorb(r, T)));
  }
  CHECK(used > 500);
}
