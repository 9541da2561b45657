#pragma once

// Residue streaming for k-Fibonacci numbers modulo 8 primes at once.
//
// Rows are 8 consecutive uint64 residues, one per modulus. Every modulus must
// be below 2^62 so sums stay below 2^63 and signed 64-bit compares work.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace kfib::simd {

inline constexpr std::size_t kLanes = 8;

/* Window of the last k terms (ring, oldest at head) and their sum. */
struct ResidueState {
  alignas(32) std::uint64_t p[kLanes];
  alignas(32) std::uint64_t sum[kLanes];
  std::vector<std::uint64_t> ring;  // k rows
  std::size_t k = 0;
  std::size_t head = 0;
  long next_index = 0;  // index of the term the next step emits
};

/* State whose next emitted term is F_2; moduli are padded by repetition. */
ResidueState initial_state(std::size_t k, const std::vector<std::uint64_t>& moduli);

struct Kernels {
  const char* name;
  /* Emits `steps` rows into out and advances the state. */
  void (*advance)(ResidueState& s, std::size_t steps, std::uint64_t* out);
  /* Offsets of rows equal to target in every lane; returns the hit count
   * (hits beyond max_hits are counted but not stored). */
  std::size_t (*match)(const std::uint64_t* rows, std::size_t count, const std::uint64_t* target,
                       std::uint32_t* hits, std::size_t max_hits);
};

const Kernels& scalar_kernels();
/* nullptr when the build has no AVX2 variant. */
const Kernels* avx2_kernels();
bool cpu_has_avx2();
/* AVX2 when built and supported, unless KFIB_SIMD=scalar. */
const Kernels& active_kernels();

}  // namespace kfib::simd
