#include "kfib/sequence.hpp"

#include <string>

namespace kfib {

namespace {

void check_k(int k) {
  if (k < 2) throw DomainError("k-generalized Fibonacci needs k >= 2, got " + std::to_string(k));
}

void check_index(int k, long n) {
  check_k(k);
  if (n < -(k - 2))
    throw IndexBelowDefinition("F_n^(" + std::to_string(k) + ") is undefined for n = " + std::to_string(n));
}

}  // namespace

KFibWindow::KFibWindow(int k) : k_(k), last_index_(1), values_(static_cast<std::size_t>(k)), sum_(1) {
  values_.back() = 1;
}

KFibWindow KFibWindow::initial(int k) {
  check_k(k);
  return KFibWindow(k);
}

void KFibWindow::advance() {
  mpz_class& oldest = values_[head_];
  mpz_class next = sum_;
  sum_ *= 2;
  sum_ -= oldest;
  oldest = std::move(next);
  head_ = (head_ + 1) % values_.size();
  ++last_index_;
}

void KFibWindow::advance_to(long n) {
  while (last_index_ < n) advance();
}

mpz_class kfib_at(int k, long n) {
  check_index(k, n);
  if (n <= 0) return 0;
  KFibWindow w = KFibWindow::initial(k);
  w.advance_to(n);
  return w.last();
}

std::vector<mpz_class> kfib_table(int k, long n_max) {
  check_k(k);
  std::vector<mpz_class> out;
  if (n_max < 0) return out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  out.emplace_back(0);
  KFibWindow w = KFibWindow::initial(k);
  for (long n = 1; n <= n_max; ++n) {
    w.advance_to(n);
    out.push_back(w.last());
  }
  return out;
}

std::uint64_t kfib_mod(int k, long n, std::uint64_t modulus) {
  check_index(k, n);
  if (modulus < 2) throw DomainError("kfib_mod needs modulus >= 2");
  if (n <= 0) return 0;
  if (n <= 2) return 1 % modulus;
  // ring of F_{n-k-1}, ..., F_{n-1}; F_n = 2 F_{n-1} - F_{n-k-1}
  const std::size_t len = static_cast<std::size_t>(k) + 1;
  std::vector<std::uint64_t> ring(len, 0);
  // seed with F_{2-k}, ..., F_2 (k+1 terms): zeros then F_1 = F_2 = 1
  ring[len - 2] = 1 % modulus;
  ring[len - 1] = 1 % modulus;
  std::size_t head = 0;  // oldest
  std::uint64_t prev = ring[len - 1];
  for (long i = 3; i <= n; ++i) {
    std::uint64_t next = mod64::sub(mod64::add(prev, prev, modulus), ring[head], modulus);
    ring[head] = next;
    head = (head + 1) % len;
    prev = next;
  }
  return prev;
}

bool ratio_check(int k, long m) {
  if (k < 3 || m < 3) throw DomainError("ratio_check needs k >= 3 and m >= 3");
  KFibWindow w = KFibWindow::initial(k);
  w.advance_to(m - 1);
  mpz_class before = w.last();
  w.advance_to(m + 1);
  return 7 * before <= 3 * w.last();
}

namespace mod64 {

std::uint64_t pow(std::uint64_t base, std::uint64_t e, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (e != 0) {
    if (e & 1U) result = mul(result, base, p);
    base = mul(base, base, p);
    e >>= 1;
  }
  return result;
}

std::uint64_t reduce(const mpz_class& v, std::uint64_t p) {
  mpz_class r;
  mpz_class pz;
  mpz_import(pz.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), pz.get_mpz_t());
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, r.get_mpz_t());
  return out;
}

}  // namespace mod64

}  // namespace kfib
