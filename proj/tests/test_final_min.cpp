#include <cmath>

#include "doctest.h"
#include "kfib/final_min.hpp"
#include "kfib/roots.hpp"
#include "kfib/search.hpp"

using kfib::num::Ball;
namespace num = kfib::num;

TEST_CASE("single cell x = 20, k = 3 at two precisions") {
  for (auto v : {kfib::DenominatorVariant::ExpX, kfib::DenominatorVariant::Exp2X}) {
    const auto t = kfib::t_interval(20);
    Ball best, best4;
    for (long s = t.first; s <= t.last; ++s) {
      const Ball a = kfib::final_min_value(3, 20, s, v, 256);
      const Ball b = kfib::final_min_value(3, 20, s, v, 1024);
      REQUIRE(a.overlaps(b));
      REQUIRE(b.rad_q() <= a.rad_q());
      best = s == t.first ? a : min(best, a);
      best4 = s == t.first ? b : min(best4, b);
    }
    CHECK(best.overlaps(best4));
    CHECK(num::certified_lt(Ball::from_decimal("0.0003"), best4));

    // direct double evaluation of the same expression
    const double alpha = kfib::dominant_root(3, 64).to_double();
    const double g = (alpha - 1) / (2 + 4 * (alpha - 2));
    const double e = v == kfib::DenominatorVariant::ExpX ? 20 : 40;
    double ref = 1e9;
    for (long s = t.first; s <= t.last; ++s)
      ref = std::min(ref, std::abs(std::pow(alpha, -s) * std::pow(g, -19.0) / (1 + std::pow(alpha, -e)) - 1));
    CHECK(std::abs(best4.to_double() / ref - 1) < 1e-9);
  }
}

TEST_CASE("full range exceeds 0.0003 and gives m <= 33") {
  for (auto v : {kfib::DenominatorVariant::ExpX, kfib::DenominatorVariant::Exp2X}) {
    auto r = kfib::final_min_scan({20, 150}, {3, 5}, v);
    CHECK(num::certified_lt(Ball::from_decimal("0.0003"), r.minimum));
    CHECK(r.m_bound <= 33);
    CHECK(r.k >= 3);
    CHECK(r.k <= 5);
    const auto t = kfib::t_interval(r.x);
    CHECK(r.t >= t.first);
    CHECK(r.t <= t.last);
    CHECK(r.minimum.overlaps(kfib::final_min_value(r.k, r.x, r.t, v, 256)));
  }
}

TEST_CASE("m bound from a minimum") {
  // 2.11 (7/4)^(-(m-2)/2) > 0.0003 holds up to m = 33
  const double lhs33 = 2.11 * std::pow(1.75, -31.0 / 2), lhs34 = 2.11 * std::pow(1.75, -32.0 / 2);
  CHECK(lhs33 > 0.0003);
  CHECK(lhs34 < 0.0003);
  CHECK(kfib::m_bound_from_minimum(Ball::from_decimal("0.0003")) == 33);
  CHECK(kfib::m_bound_from_minimum(Ball::from_decimal("2.0")) == 2);
}

TEST_CASE("variant names") {
  CHECK(kfib::variant_from_string("exp_x") == kfib::DenominatorVariant::ExpX);
  CHECK(kfib::variant_from_string("exp_2x") == kfib::DenominatorVariant::Exp2X);
  CHECK(std::string(kfib::to_string(kfib::DenominatorVariant::Exp2X)) == "exp_2x");
  CHECK_THROWS_AS(kfib::variant_from_string("exp_3x"), kfib::ConfigInvalid);
}
