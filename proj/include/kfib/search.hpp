#pragma once

// Exhaustive search for (F_{m+1})^x - (F_{m-1})^x = F_n on finite windows.
//
// For each (k, m, x) the admissible n satisfy (m-2)x + 2 < n < mx + 2. The
// difference is reduced modulo a set of primes and compared with streamed
// residues of F_n; rows agreeing on every modulus are confirmed exactly.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "kfib/bound_chain.hpp"

namespace kfib {

struct SearchWindow {
  IntRange k_range;
  IntRange m_range;
  IntRange x_range;
  std::vector<std::uint64_t> moduli;  // empty: pure exact mode
};

struct SolutionRecord {
  int k = 0;
  long m = 0;
  long n = 0;
  long x = 0;
  bool verified = false;
};

struct SearchOptions {
  double budget = 4e9;                 // estimated work units before WindowTooLarge
  bool allow_outside_theorem = false;  // k = 2 or x = 1 control windows
  bool size_bracket = false;           // restrict n to the alpha^(n-2) <= F_n <= alpha^(n-1) bracket
};

struct SearchStats {
  long cells = 0;             // (k, m, x) triples scanned
  long rows_compared = 0;
  long modular_survivors = 0;
  long exact_checks = 0;
};

struct SearchResult {
  std::vector<SolutionRecord> solutions;  // ordered by (k, m, x, n)
  SearchStats stats;
  const char* kernel = "";
};

/* The eight largest primes below 2^61. */
std::vector<std::uint64_t> default_moduli();

double estimate_search_work(const SearchWindow& window, const SearchOptions& options = {});
SearchResult exhaustive_search(const SearchWindow& window, const SearchOptions& options = {});

/* Integers strictly inside (0.68x - 0.69, 1.27x - 1.26). */
struct TInterval {
  mpq_class lower;  // open
  mpq_class upper;  // open
  long first = 0;
  long last = 0;
};

TInterval t_interval(long x);

}  // namespace kfib
