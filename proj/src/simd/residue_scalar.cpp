#include "kfib/residue_kernels.hpp"
#include "kfib/errors.hpp"
#include "kfib/sequence.hpp"

namespace kfib::simd {

ResidueState initial_state(std::size_t k, const std::vector<std::uint64_t>& moduli) {
  if (k < 2) throw DomainError("residue stream needs k >= 2");
  if (moduli.empty() || moduli.size() > kLanes) throw DomainError("residue stream needs 1..8 moduli");
  ResidueState s;
  for (std::size_t l = 0; l < kLanes; ++l) {
    std::uint64_t p = moduli[l % moduli.size()];
    if (p < 2 || p >= (std::uint64_t{1} << 62)) throw DomainError("moduli must lie in [2, 2^62)");
    s.p[l] = p;
    s.sum[l] = 1;  // F_2
  }
  s.k = k;
  s.ring.assign(k * kLanes, 0);  // F_{2-k}, ..., F_0, F_1
  for (std::size_t l = 0; l < kLanes; ++l) s.ring[(k - 1) * kLanes + l] = 1;
  s.head = 0;
  s.next_index = 2;
  return s;
}

namespace {

void advance_scalar(ResidueState& s, std::size_t steps, std::uint64_t* out) {
  const std::size_t k = s.k;
  std::uint64_t* ring = s.ring.data();
  std::size_t head = s.head;
  for (std::size_t i = 0; i < steps; ++i) {
    std::uint64_t* oldest = ring + head * kLanes;
    std::uint64_t* row = out + i * kLanes;
    for (std::size_t l = 0; l < kLanes; ++l) {
      const std::uint64_t p = s.p[l], cur = s.sum[l];
      row[l] = cur;
      s.sum[l] = mod64::add(cur, mod64::sub(cur, oldest[l], p), p);
      oldest[l] = cur;
    }
    if (++head == k) head = 0;
  }
  s.head = head;
  s.next_index += static_cast<long>(steps);
}

std::size_t match_scalar(const std::uint64_t* rows, std::size_t count, const std::uint64_t* target,
                         std::uint32_t* hits, std::size_t max_hits) {
  std::size_t found = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t* r = rows + i * kLanes;
    bool eq = true;
    for (std::size_t l = 0; l < kLanes; ++l) eq &= r[l] == target[l];
    if (eq) {
      if (found < max_hits) hits[found] = static_cast<std::uint32_t>(i);
      ++found;
    }
  }
  return found;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", advance_scalar, match_scalar};
  return k;
}

}  // namespace kfib::simd
