#include <cmath>
#include <set>

#include "doctest.h"
#include "kfib/bound_chain.hpp"

using kfib::num::Ball;
namespace num = kfib::num;

namespace {

const kfib::ChainStage* find_stage(const kfib::BoundChainReport& r, const std::string& name) {
  for (const auto& s : r.stages)
    if (s.name == name) return &s;
  return nullptr;
}

// x = c (log x)^15 (log log x)^18 solved in doubles on L = log x
double absolute_x_double(double c) {
  auto phi = [&](double L) { return L - std::log(c) - 15 * std::log(L) - 18 * std::log(std::log(L)); };
  double lo = std::log(c), hi = 2 * lo;
  while (phi(hi) < 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (phi(mid) < 0 ? lo : hi) = mid;
  }
  return std::exp(hi);
}

}  // namespace

TEST_CASE("small-m chain reproduces the reference bounds") {
  auto r = kfib::bound_chain(kfib::Scenario::SmallM);
  REQUIRE(r.ok());
  REQUIRE(r.x_bound);
  REQUIRE(r.n_bound);
  CHECK(r.m_range.lo == 3);
  CHECK(r.m_range.hi == 1457);
  CHECK(r.k_bound == 74);
  CHECK(num::certified_le(*r.x_bound, Ball::from_decimal("1.81e32")));
  CHECK(num::certified_lt(*r.n_bound, Ball::from_decimal("2.63e35")));
  const double direct = 7.1e13 * std::pow(1457.0, 5) * std::pow(std::log(1457.0), 3);
  CHECK(std::abs(r.x_bound->to_double() / direct - 1) < 1e-12);
  CHECK(std::floor(std::log(direct)) <= 74);
  for (const auto& s : r.stages) CHECK_MESSAGE(s.holds, s.name);
}

TEST_CASE("large-m chain reproduces the absolute bounds") {
  auto r = kfib::bound_chain(kfib::Scenario::LargeM);
  REQUIRE(r.ok());
  REQUIRE(r.x_bound);
  CHECK(num::certified_lt(*r.x_bound, Ball::from_decimal("2.27e105")));
  CHECK(r.k_bound <= 242);
  const double x_ref = absolute_x_double(1.85e56);
  CHECK(std::abs(r.x_bound->to_double() / x_ref - 1) < 1e-9);
  CHECK(r.m_range.lo == 1458);
  std::set<std::string> names;
  for (const auto& s : r.stages) {
    CHECK_MESSAGE(s.holds, s.name);
    names.insert(s.name);
  }
  for (const char* required : {"g-not-unit", "lmn-coefficient", "branch-log-x", "m-large", "x-large-coefficient",
                               "x-absolute", "k-large", "legendre-q", "t-window-lower-k3"})
    CHECK_MESSAGE(names.count(required) == 1, required);
}

TEST_CASE("absorption check at m = 3") {
  auto r = kfib::bound_chain(kfib::Scenario::SmallM);
  const auto* s = find_stage(r, "log-t-absorption");
  REQUIRE(s != nullptr);
  const double l3 = std::log(3.0);
  CHECK(28 + 6 * l3 + 2 * std::log(l3) < 32 * l3);
  CHECK(std::abs(s->lhs.to_double() - (28 + 6 * l3 + 2 * std::log(l3))) < 1e-12);
  CHECK(std::abs(s->rhs.to_double() - 32 * l3) < 1e-12);
}

TEST_CASE("a lowered constant breaks the chain at its stage") {
  kfib::ChainOptions o;
  o.constants.set("small_x", "1.0e32");
  auto r = kfib::run_bound_chain(kfib::Scenario::SmallM, o);
  CHECK_FALSE(r.ok());
  CHECK(*r.broken_stage == "small-x");
  try {
    kfib::bound_chain(kfib::Scenario::SmallM, o);
    FAIL("expected ChainBroken");
  } catch (const kfib::ChainBroken& e) {
    CHECK(e.stage() == "small-x");
  }

  kfib::ChainOptions large;
  large.constants.set("x_abs", "2.2e105");
  auto rl = kfib::run_bound_chain(kfib::Scenario::LargeM, large);
  CHECK(*rl.broken_stage == "x-absolute");

  kfib::ChainOptions k241;
  k241.constants.set("k_abs", "241");
  CHECK(*kfib::run_bound_chain(kfib::Scenario::LargeM, k241).broken_stage == "k-large");
}

TEST_CASE("x_min above what k >= 3 guarantees is rejected") {
  kfib::ChainOptions o;
  o.x_min = 22;
  CHECK(*kfib::run_bound_chain(kfib::Scenario::LargeM, o).broken_stage == "x-min");
}

TEST_CASE("constants are validated") {
  kfib::ChainConstants c;
  CHECK_THROWS_AS(c.set("no_such_constant", "1"), kfib::ConfigInvalid);
  CHECK_THROWS_AS(c.set("small_x", "abc"), kfib::ConfigInvalid);
  CHECK(c.get("x_abs") == "2.27e105");
  CHECK(kfib::scenario_from_string("large_m") == kfib::Scenario::LargeM);
  CHECK_THROWS_AS(kfib::scenario_from_string("medium"), kfib::ConfigInvalid);
}

TEST_CASE("chain is deterministic") {
  auto a = kfib::bound_chain(kfib::Scenario::LargeM);
  auto b = kfib::bound_chain(kfib::Scenario::LargeM);
  REQUIRE(a.stages.size() == b.stages.size());
  for (std::size_t i = 0; i < a.stages.size(); ++i) {
    CHECK(a.stages[i].lhs.mid_q() == b.stages[i].lhs.mid_q());
    CHECK(a.stages[i].rhs.rad_q() == b.stages[i].rhs.rad_q());
  }
}
