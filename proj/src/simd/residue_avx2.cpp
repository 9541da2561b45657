#include <immintrin.h>

#include "kfib/residue_kernels.hpp"

namespace kfib::simd {

namespace {

/* a + b mod p and a - b mod p for a, b < p < 2^62. */
inline __m256i add_mod(__m256i a, __m256i b, __m256i p) {
  __m256i s = _mm256_add_epi64(a, b);
  __m256i ge = _mm256_cmpgt_epi64(s, _mm256_sub_epi64(p, _mm256_set1_epi64x(1)));
  return _mm256_sub_epi64(s, _mm256_and_si256(ge, p));
}

inline __m256i sub_mod(__m256i a, __m256i b, __m256i p) {
  __m256i d = _mm256_sub_epi64(a, b);
  __m256i neg = _mm256_cmpgt_epi64(_mm256_setzero_si256(), d);
  return _mm256_add_epi64(d, _mm256_and_si256(neg, p));
}

void advance_avx2(ResidueState& s, std::size_t steps, std::uint64_t* out) {
  const __m256i p0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(s.p));
  const __m256i p1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(s.p + 4));
  __m256i s0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(s.sum));
  __m256i s1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(s.sum + 4));
  const std::size_t k = s.k;
  std::uint64_t* ring = s.ring.data();
  std::size_t head = s.head;
  for (std::size_t i = 0; i < steps; ++i) {
    auto* old = reinterpret_cast<__m256i*>(ring + head * kLanes);
    auto* row = reinterpret_cast<__m256i*>(out + i * kLanes);
    __m256i o0 = _mm256_loadu_si256(old), o1 = _mm256_loadu_si256(old + 1);
    _mm256_storeu_si256(row, s0);
    _mm256_storeu_si256(row + 1, s1);
    _mm256_storeu_si256(old, s0);
    _mm256_storeu_si256(old + 1, s1);
    s0 = add_mod(s0, sub_mod(s0, o0, p0), p0);
    s1 = add_mod(s1, sub_mod(s1, o1, p1), p1);
    if (++head == k) head = 0;
  }
  _mm256_store_si256(reinterpret_cast<__m256i*>(s.sum), s0);
  _mm256_store_si256(reinterpret_cast<__m256i*>(s.sum + 4), s1);
  s.head = head;
  s.next_index += static_cast<long>(steps);
}

std::size_t match_avx2(const std::uint64_t* rows, std::size_t count, const std::uint64_t* target,
                       std::uint32_t* hits, std::size_t max_hits) {
  const __m256i t0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(target));
  const __m256i t1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(target + 4));
  std::size_t found = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto* r = reinterpret_cast<const __m256i*>(rows + i * kLanes);
    __m256i e = _mm256_and_si256(_mm256_cmpeq_epi64(_mm256_loadu_si256(r), t0),
                                 _mm256_cmpeq_epi64(_mm256_loadu_si256(r + 1), t1));
    if (_mm256_movemask_epi8(e) == -1) {
      if (found < max_hits) hits[found] = static_cast<std::uint32_t>(i);
      ++found;
    }
  }
  return found;
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{"avx2", advance_avx2, match_avx2};
  return &k;
}

}  // namespace kfib::simd
