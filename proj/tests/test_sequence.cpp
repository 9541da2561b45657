#include <random>
#include <vector>

#include "doctest.h"
#include "kfib/errors.hpp"
#include "kfib/sequence.hpp"

using kfib::kfib_at;
using kfib::kfib_mod;

namespace {

// Plain recurrence over the explicit initial segment.
std::vector<mpz_class> naive(int k, long n_max) {
  std::vector<mpz_class> v(static_cast<std::size_t>(k - 1), 0);  // F_{-(k-2)} .. F_0
  v.push_back(1);                                                // F_1
  while (static_cast<long>(v.size()) - (k - 1) <= n_max) {
    mpz_class s = 0;
    for (int j = 1; j <= k; ++j) s += v[v.size() - static_cast<std::size_t>(j)];
    v.push_back(s);
  }
  return {v.begin() + (k - 2), v.end()};  // index 0 is F_0
}

mpz_class pow2(long e) { return mpz_class(1) << static_cast<mp_bitcnt_t>(e); }

}  // namespace

TEST_CASE("spot values") {
  CHECK(kfib_at(7, 8) == 64);
  CHECK(kfib_at(5, 7) == 31);
  CHECK(kfib_at(2, 10) == 55);
  CHECK(kfib_at(3, 10) == 149);
  CHECK(kfib_at(4, 0) == 0);
  CHECK(kfib_at(4, -2) == 0);
  CHECK_THROWS_AS(kfib_at(4, -3), kfib::IndexBelowDefinition);
  CHECK_THROWS_AS(kfib_at(1, 5), kfib::DomainError);
}

TEST_CASE("agrees with the naive recurrence") {
  for (int k = 2; k <= 12; ++k) {
    auto ref = naive(k, 120);
    auto table = kfib::kfib_table(k, 120);
    REQUIRE(table.size() == 121);
    for (long n = 0; n <= 120; ++n) REQUIRE(table[static_cast<std::size_t>(n)] == ref[static_cast<std::size_t>(n)]);
    CHECK(kfib_at(k, 77) == ref[77]);
  }
}

TEST_CASE("powers of two at the start") {
  for (int k = 2; k <= 100; ++k) {
    auto f = kfib::kfib_table(k, k + 2);
    for (long n = 2; n <= k + 1; ++n) REQUIRE(f[static_cast<std::size_t>(n)] == pow2(n - 2));
    REQUIRE(f[static_cast<std::size_t>(k + 2)] == pow2(k) - 1);
  }
}

TEST_CASE("three-term recursion and growth bound") {
  for (int k = 2; k <= 30; ++k) {
    auto f = kfib::kfib_table(k, 500);
    auto at = [&](long n) -> mpz_class { return n < 0 ? mpz_class(0) : f[static_cast<std::size_t>(n)]; };
    for (long n = 3; n <= 500; ++n) REQUIRE(at(n) == 2 * at(n - 1) - at(n - k - 1));
    for (long n = k + 2; n <= 500; ++n) REQUIRE(at(n) < pow2(n - 2));
  }
}

TEST_CASE("classical identity at k = 2") {
  auto f = kfib::kfib_table(2, 401);
  for (std::size_t n = 1; n <= 200; ++n) REQUIRE(f[n + 1] * f[n + 1] - f[n - 1] * f[n - 1] == f[2 * n]);
}

TEST_CASE("window slides by the recurrence") {
  auto w = kfib::KFibWindow::initial(5);
  for (int step = 0; step < 200; ++step) {
    mpz_class s = 0;
    for (int i = 0; i < 5; ++i) s += w.at(i);
    CHECK(s == w.running_sum());
    w.advance();
    REQUIRE(w.last() == s);
  }
  w.advance_to(300);
  CHECK(w.last_index() == 300);
  CHECK(w.last() == kfib_at(5, 300));
}

TEST_CASE("kfib_mod matches kfib_at on 10^3 random cases") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> kd(2, 40);
  std::uniform_int_distribution<long> nd(-10, 2000);
  std::uniform_int_distribution<std::uint64_t> pd(2, (std::uint64_t{1} << 62) - 1);
  for (int i = 0; i < 1000; ++i) {
    const int k = kd(rng);
    long n = nd(rng);
    if (n < -(k - 2)) n = -(k - 2);
    const std::uint64_t p = i % 3 == 0 ? pd(rng) % 1000 + 2 : pd(rng);
    const mpz_class ref = kfib_at(k, n) % mpz_class(std::to_string(p));
    REQUIRE(kfib_mod(k, n, p) == std::stoull(ref.get_str()));
  }
  CHECK(kfib_mod(3, 20, 97) == mpz_class(kfib_at(3, 20) % 97).get_ui());
  CHECK(kfib_mod(2, 1, 5) == 1);
  CHECK(kfib_mod(4, 0, 7) == 0);
}

TEST_CASE("ratio lemma") {
  CHECK(kfib::ratio_check(3, 3));
  CHECK(kfib::ratio_check(3, 10));
  CHECK(kfib::ratio_check(5, 5));
  for (int k = 3; k <= 30; ++k)
    for (long m = 3; m <= 300; ++m) REQUIRE(kfib::ratio_check(k, m));
  CHECK_THROWS_AS(kfib::ratio_check(2, 5), kfib::DomainError);
  CHECK_THROWS_AS(kfib::ratio_check(3, 2), kfib::DomainError);
}

TEST_CASE("mod64 helpers") {
  const std::uint64_t p = (std::uint64_t{1} << 61) - 1;
  CHECK(kfib::mod64::add(p - 1, 5, p) == 4);
  CHECK(kfib::mod64::sub(3, 5, p) == p - 2);
  CHECK(kfib::mod64::pow(3, p - 1, p) == 1);
  CHECK(kfib::mod64::reduce(mpz_class(-1), p) == p - 1);
}
