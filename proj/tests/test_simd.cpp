#include <random>
#include <vector>

#include "doctest.h"
#include "kfib/residue_kernels.hpp"
#include "kfib/search.hpp"
#include "kfib/sequence.hpp"

namespace simd = kfib::simd;

namespace {

std::vector<std::uint64_t> random_moduli(std::mt19937_64& rng, std::size_t count) {
  std::uniform_int_distribution<std::uint64_t> d(2, (std::uint64_t{1} << 62) - 1);
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(d(rng));
  return out;
}

std::vector<std::uint64_t> run(const simd::Kernels& kern, std::size_t k, const std::vector<std::uint64_t>& moduli,
                               std::size_t steps, std::size_t chunk) {
  simd::ResidueState s = simd::initial_state(k, moduli);
  std::vector<std::uint64_t> rows(steps * simd::kLanes);
  for (std::size_t done = 0; done < steps; done += chunk) kern.advance(s, std::min(chunk, steps - done), rows.data() + done * simd::kLanes);
  return rows;
}

}  // namespace

TEST_CASE("scalar residues match kfib_mod") {
  std::mt19937_64 rng(7);
  for (std::size_t k : {2u, 3u, 5u, 17u, 242u}) {
    auto moduli = random_moduli(rng, 8);
    moduli[0] = (std::uint64_t{1} << 62) - 57;
    const std::size_t steps = 400;
    auto rows = run(simd::scalar_kernels(), k, moduli, steps, 37);
    for (std::size_t i = 0; i < steps; i += 13)
      for (std::size_t l = 0; l < simd::kLanes; ++l)
        REQUIRE(rows[i * simd::kLanes + l] == kfib::kfib_mod(static_cast<int>(k), static_cast<long>(i) + 2, moduli[l]));
  }
}

TEST_CASE("short modulus lists are padded") {
  auto s = simd::initial_state(3, {1000003, 998244353});
  CHECK(s.p[2] == 1000003);
  CHECK(s.p[3] == 998244353);
  CHECK(s.next_index == 2);
}

TEST_CASE("AVX2 kernels agree with scalar") {
  const simd::Kernels* avx = simd::avx2_kernels();
  if (avx == nullptr || !simd::cpu_has_avx2()) {
    MESSAGE("AVX2 unavailable, equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng() % 250;
    auto moduli = random_moduli(rng, 8);
    if (trial % 5 == 0) moduli.assign(8, (std::uint64_t{1} << 62) - 1);
    const std::size_t steps = 1 + rng() % 2000, chunk = 1 + rng() % 300;
    auto a = run(simd::scalar_kernels(), k, moduli, steps, chunk);
    auto b = run(*avx, k, moduli, steps, chunk);
    REQUIRE(a == b);

    // plant targets and compare match results
    std::vector<std::uint64_t> target(a.begin() + static_cast<long>((steps / 2) * simd::kLanes),
                                      a.begin() + static_cast<long>((steps / 2 + 1) * simd::kLanes));
    std::vector<std::uint32_t> ha(64), hb(64);
    const std::size_t na = simd::scalar_kernels().match(a.data(), steps, target.data(), ha.data(), 64);
    const std::size_t nb = avx->match(a.data(), steps, target.data(), hb.data(), 64);
    REQUIRE(na == nb);
    REQUIRE(na >= 1);
    for (std::size_t i = 0; i < std::min<std::size_t>(na, 64); ++i) REQUIRE(ha[i] == hb[i]);
  }
}

TEST_CASE("match counts hits beyond the cap") {
  std::vector<std::uint64_t> rows(10 * simd::kLanes, 5);
  std::vector<std::uint64_t> target(simd::kLanes, 5);
  rows[3 * simd::kLanes + 7] = 6;
  std::uint32_t hits[4];
  CHECK(simd::scalar_kernels().match(rows.data(), 10, target.data(), hits, 4) == 9);
  CHECK(hits[3] == 4);
}

TEST_CASE("the active kernel finds the k = 2 solutions") {
  kfib::SearchOptions o;
  o.allow_outside_theorem = true;
  auto r = kfib::exhaustive_search({{2, 2}, {2, 12}, {2, 2}, kfib::default_moduli()}, o);
  CHECK(std::string(r.kernel) == simd::active_kernels().name);
  CHECK(r.solutions.size() == 11);
}
