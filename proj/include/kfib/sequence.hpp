#pragma once

// Exact k-generalized Fibonacci numbers.
//
// F_{-(k-2)} = ... = F_0 = 0, F_1 = 1 and F_n = F_{n-1} + ... + F_{n-k}.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "kfib/errors.hpp"

namespace kfib {

/* k consecutive terms plus their sum, so one step costs one addition and
 * one subtraction: F_{n+1} = S and S' = 2S - F_{n+1-k}. */
class KFibWindow {
 public:
  /* Window holding F_{-(k-2)}, ..., F_1. */
  static KFibWindow initial(int k);

  int k() const { return k_; }
  long start_index() const { return last_index_ - k_ + 1; }
  long last_index() const { return last_index_; }
  /* Term at index start_index() + i. */
  const mpz_class& at(int i) const { return values_[(head_ + static_cast<std::size_t>(i)) % values_.size()]; }
  const mpz_class& last() const { return at(k_ - 1); }
  const mpz_class& running_sum() const { return sum_; }

  void advance();
  void advance_to(long n);

 private:
  KFibWindow(int k);
  int k_;
  long last_index_;
  std::vector<mpz_class> values_;  // ring buffer, oldest at head_
  std::size_t head_ = 0;
  mpz_class sum_;
};

mpz_class kfib_at(int k, long n);
/* F_0, ..., F_{n_max} for one k. */
std::vector<mpz_class> kfib_table(int k, long n_max);
/* F_n mod modulus with machine words only. */
std::uint64_t kfib_mod(int k, long n, std::uint64_t modulus);
/* 7 F_{m-1} <= 3 F_{m+1}, exactly. */
bool ratio_check(int k, long m);

namespace mod64 {
inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return a >= p - b ? a - (p - b) : a + b; }
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return a >= b ? a - b : a + (p - b); }
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}
std::uint64_t pow(std::uint64_t base, std::uint64_t e, std::uint64_t p);
std::uint64_t reduce(const mpz_class& v, std::uint64_t p);
}  // namespace mod64

}  // namespace kfib
