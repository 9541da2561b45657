#include <random>
#include <vector>

#include "doctest.h"
#include "kfib/ball.hpp"
#include "kfib/expr.hpp"
#include "oracle.hpp"

using kfib::num::Ball;
using kfib::num::Expr;
namespace num = kfib::num;

TEST_CASE("exact constructors") {
  CHECK(Ball::exact(5).is_exact());
  CHECK(Ball::from_rational(mpq_class(3, 4)).is_exact());
  Ball third = Ball::from_rational(mpq_class(1, 3));
  CHECK_FALSE(third.is_exact());
  CHECK(third.contains(mpq_class(1, 3)));
  CHECK(num::parse_decimal("2.64e35") == mpq_class(mpz_class("264000000000000000000000000000000000")));
  CHECK(num::parse_decimal("-1.5e-1") == mpq_class(-3, 20));
  CHECK_THROWS_AS(num::parse_decimal("1.2.3"), kfib::ConfigInvalid);
}

TEST_CASE("ball_eval small examples") {
  const Expr x = Expr::input(0);
  std::vector<Ball> one{Ball::exact(1)};
  Ball l1 = num::ball_eval(log(x), one, 256);
  CHECK(l1.contains(mpq_class(0)));
  CHECK(l1.rad_log2() <= -256);

  std::vector<Ball> two{Ball::exact(2)};
  Ball l2 = num::ball_eval(log(x), two, 256);
  oracle::Fixed ref = oracle::log_q(2, 400);
  CHECK(oracle::consistent(l2, ref.value(), ref.tolerance()));
  CHECK(l2.rad_log2() < -240);

  Ball p = num::ball_eval(pow(Expr(2), Expr(10)), {}, 128);
  CHECK(p.is_exact());
  CHECK(p.mid_q() == 1024);
}

TEST_CASE("inclusion against exact rationals: 10^4 random expressions") {
  std::mt19937_64 rng(20240601);
  const Expr a = Expr::input(0), b = Expr::input(1), c = Expr::input(2);
  const std::vector<Expr> shapes{a + b * c, (a - b) / c, a * a - b / c, pow(a, Expr(3)) + c,
                                 -(a * b) + c * c / a, pow(b, Expr(-2)) - a};
  std::uniform_int_distribution<int> bits_dist(53, 400);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    mpq_class qa = oracle::random_q(rng, 1000000, 999), qb = oracle::random_q(rng, 1000000, 999),
              qc = oracle::random_q(rng, 1000000, 999);
    if (qa == 0 || qb == 0 || qc == 0) continue;
    const long bits = bits_dist(rng);
    // inexact inputs on purpose: the rounding of 1/3-like values must be carried
    std::vector<Ball> in{Ball::from_rational(qa, bits), Ball::from_rational(qb, bits), Ball::from_rational(qc, bits)};
    const mpq_class exact[] = {qa + qb * qc,
                               (qa - qb) / qc,
                               qa * qa - qb / qc,
                               qa * qa * qa + qc,
                               -(qa * qb) + qc * qc / qa,
                               1 / (qb * qb) - qa};
    const std::size_t s = static_cast<std::size_t>(i) % shapes.size();
    Ball r = num::ball_eval(shapes[s], in, bits);
    INFO("case " << i << " shape " << s);
    REQUIRE(r.contains(mpq_class(exact[s])));
    ++checked;
  }
  CHECK(checked > 9900);
}

TEST_CASE("log and exp against series oracles") {
  std::mt19937_64 rng(7);
  const Expr x = Expr::input(0);
  for (int i = 0; i < 300; ++i) {
    mpq_class r = oracle::random_q(rng, 200, 100);
    if (abs(r) > 2) continue;
    Ball e = num::ball_eval(exp(x), std::vector<Ball>{Ball::from_rational(r, 300)}, 300);
    oracle::Fixed ref = oracle::exp_q(r, 500);
    REQUIRE(oracle::consistent(e, ref.value(), ref.tolerance()));

    mpq_class y = abs(r) + mpq_class(1, 4);
    if (y > 4) continue;
    Ball l = num::ball_eval(log(x), std::vector<Ball>{Ball::from_rational(y, 300)}, 300);
    oracle::Fixed lref = oracle::log_q(y, 500);
    REQUIRE(oracle::consistent(l, lref.value(), lref.tolerance()));
  }
}

TEST_CASE("radius at least halves when precision doubles") {
  const Expr e = log(Expr::constant(mpq_class(7, 3))) * exp(Expr::constant(mpq_class(-5, 11))) +
                 pow(Expr::constant(mpq_class(13, 10)), Expr::constant(mpq_class(1, 3)));
  double prev = num::ball_eval(e, {}, 64).rad_log2();
  for (long bits = 128; bits <= 4096; bits *= 2) {
    const double now = num::ball_eval(e, {}, bits).rad_log2();
    CHECK(now <= prev - 1);
    prev = now;
  }
}

TEST_CASE("certified floor") {
  CHECK(num::certified_floor(Ball::from_decimal("3.5")) == 3);
  CHECK(num::certified_floor(Ball::from_decimal("2.9999999999")) == 2);
  CHECK(num::certified_floor(Ball::from_decimal("-0.25")) == -1);
  Ball golden = (1 + sqrt(Ball::exact(5))) / 2;
  CHECK(num::certified_floor(golden) == 1);
  Ball fuzzy = Ball::exact(3);
  fuzzy.widen(mpq_class(1, 1000));
  CHECK_THROWS_AS(num::certified_floor(fuzzy), kfib::PrecisionExhausted);
}

TEST_CASE("certified compare") {
  CHECK(num::certified_compare(Ball::exact(1), Ball::exact(2)) == num::Ordering::Less);
  CHECK(num::certified_compare(log(Ball::exact(3)), log(Ball::exact(2))) == num::Ordering::Greater);
  Ball x = log(Ball::exact(3));
  CHECK_THROWS_AS(num::certified_compare(x, x), kfib::PrecisionExhausted);
  CHECK(num::certified_le(Ball::exact(4), Ball::exact(4)));
  CHECK_THROWS_AS(num::certified_lt(Ball::exact(4), Ball::exact(4)), kfib::PrecisionExhausted);
}

TEST_CASE("escalation from sources") {
  // log(1 + 2^-600) > 0 needs more than 256 bits to separate from 0
  num::BallSource tiny = [](long bits) {
    mpz_class d = mpz_class(1) << 600;
    return log(Ball::from_rational(mpq_class(d + 1, d), bits));
  };
  num::BallSource zero = [](long bits) { return Ball::exact(0, bits); };
  num::PrecisionPolicy p;
  CHECK(num::certified_compare(zero, tiny, p) == num::Ordering::Less);
  p.max_bits = 512;
  CHECK_THROWS_AS(num::certified_compare(zero, tiny, p), kfib::PrecisionExhausted);
  num::PrecisionPolicy bad;
  bad.factor_num = 1;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("log needs a positive argument") {
  Ball straddle = Ball::exact(0);
  straddle.widen(mpq_class(1, 10));
  CHECK_THROWS_AS(log(straddle), kfib::PrecisionExhausted);
}

TEST_CASE("string round trip is exact") {
  Ball b = log(Ball::exact(10, 300)) / 7;
  Ball c = Ball::from_strings(b.mid_decimal(), b.rad_decimal(), b.precision());
  CHECK(c.mid_q() == b.mid_q());
  CHECK(c.rad_q() == b.rad_q());
}
