#include <cstdlib>
#include <cstring>

#include "kfib/residue_kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define KFIB_X86 1
#else
#define KFIB_X86 0
#endif

namespace kfib::simd {

#ifndef KFIB_BUILD_AVX2
const Kernels* avx2_kernels() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if KFIB_X86 && defined(__GNUC__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Kernels& active_kernels() {
  static const Kernels* chosen = [] {
    const char* env = std::getenv("KFIB_SIMD");
    bool force_scalar = env && std::strcmp(env, "scalar") == 0;
    if (!force_scalar && avx2_kernels() && cpu_has_avx2()) return avx2_kernels();
    return &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace kfib::simd
