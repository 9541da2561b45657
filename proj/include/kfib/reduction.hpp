#pragma once

// Dujella-Petho reduction: with q a convergent denominator of gamma, q > 6M
// and eps = ||mu q|| - M ||gamma q|| > 0, the inequality
//   0 < u gamma - v + mu < A B^-u
// has no solution with log(A q / eps) / log B <= u <= M.

#include <gmpxx.h>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kfib/ball.hpp"
#include "kfib/bound_chain.hpp"

namespace kfib {

struct ReductionInstance {
  int k = 0;
  long m = 0;
  num::BallSource gamma;
  num::BallSource mu;
  mpq_class A;
  num::BallSource B;
  mpz_class M;
};

struct ReductionOptions {
  num::PrecisionPolicy policy{};
  long index_cap = 2000;     // give up past this convergent index
  bool fixed_index = false;  // only try start_index itself
};

struct ReductionOutcome {
  int k = 0;
  long m = 0;
  long convergent_index = 0;
  mpz_class q;
  num::Ball epsilon;
  num::Ball mu_distance;
  num::Ball gamma_distance;
  mpz_class u_bound;
  long bits = 0;
  std::vector<long> rejected_indices;  // eps certified <= 0 there
};

/* The cell (k, m) with A = 3.01 and B = 2.3^(1/1457). */
ReductionInstance grid_instance(int k, long m, const mpz_class& M);
num::BallSource dp_base_source();
mpq_class dp_default_A();

ReductionOutcome dp_reduce_cell(const ReductionInstance& inst, long start_index, const ReductionOptions& options = {});

struct GridCell {
  int k = 0;
  long m = 0;
  std::optional<ReductionOutcome> outcome;
  std::string error;
};

struct GridReport {
  std::vector<GridCell> cells;  // ordered by (m, k)
  long skipped = 0;             // cells with k > m
  long failures = 0;
  mpz_class min_q;
  mpz_class max_q;
  std::optional<num::Ball> min_epsilon;
  mpz_class max_u_bound;
};

/* Runs every cell with k <= m in parallel; per-cell errors are collected. */
GridReport dp_reduce_grid(IntRange m_range, IntRange k_range, const mpz_class& M, long index,
                          const ReductionOptions& options = {},
                          const std::function<bool(int k, long m)>& keep = {});

/* Cells from explicit k and m lists (k <= m only). */
GridReport dp_reduce_cells(const std::vector<int>& ks, const std::vector<long>& ms, const mpz_class& M, long index,
                           const ReductionOptions& options = {});

}  // namespace kfib
