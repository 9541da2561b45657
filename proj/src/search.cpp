#include "kfib/search.hpp"

#include <algorithm>
#include <cmath>

#include "kfib/parallel.hpp"
#include "kfib/residue_kernels.hpp"
#include "kfib/roots.hpp"
#include "kfib/sequence.hpp"

namespace kfib {

std::vector<std::uint64_t> default_moduli() {
  return {2305843009213693951ULL, 2305843009213693921ULL, 2305843009213693907ULL, 2305843009213693723ULL,
          2305843009213693693ULL, 2305843009213693669ULL, 2305843009213693613ULL, 2305843009213693561ULL};
}

TInterval t_interval(long x) {
  if (x < 2) throw DomainError("t_interval needs x >= 2");
  TInterval t;
  t.lower = mpq_class(68 * x - 69, 100);
  t.upper = mpq_class(127 * x - 126, 100);
  t.lower.canonicalize();
  t.upper.canonicalize();
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), t.lower.get_num_mpz_t(), t.lower.get_den_mpz_t());
  t.first = f.get_si() + 1;
  mpz_cdiv_q(f.get_mpz_t(), t.upper.get_num_mpz_t(), t.upper.get_den_mpz_t());
  t.last = f.get_si() - 1;
  if (t.first > t.last) throw DomainError("t_interval is empty");
  return t;
}

namespace {

void validate(const SearchWindow& w, const SearchOptions& o) {
  auto empty = [](IntRange r) { return r.lo > r.hi; };
  if (empty(w.k_range) || empty(w.m_range) || empty(w.x_range)) throw DomainError("search ranges must be nonempty");
  const long k_min = o.allow_outside_theorem ? 2 : 3;
  const long x_min = o.allow_outside_theorem ? 1 : 2;
  if (w.k_range.lo < k_min) throw DomainError("search needs k >= " + std::to_string(k_min));
  if (w.x_range.lo < x_min) throw DomainError("search needs x >= " + std::to_string(x_min));
  if (w.m_range.lo < 2) throw DomainError("search needs m >= 2");
  if (w.moduli.size() > simd::kLanes) throw DomainError("at most 8 moduli");
}

struct Pair {
  int k;
  long m;
};

std::vector<Pair> pairs_of(const SearchWindow& w) {
  std::vector<Pair> out;
  for (long k = w.k_range.lo; k <= w.k_range.hi; ++k)
    for (long m = std::max(w.m_range.lo, k); m <= w.m_range.hi; ++m) out.push_back({static_cast<int>(k), m});
  return out;
}

/* n window for one x, optionally cut to the alpha^(n-2) <= F_n <= alpha^(n-1) bracket. */
struct NRange {
  long lo, hi;
};

// At x = 1 the difference lies between F_m and F_{m+1}, outside the x >= 2 bracket.
NRange n_range(long m, long x) { return x == 1 ? NRange{2, m + 1} : NRange{(m - 2) * x + 3, m * x + 1}; }

double log_mpz(const mpz_class& v) {
  long e = 0;
  double d = mpz_get_d_2exp(&e, v.get_mpz_t());
  return std::log(d) + static_cast<double>(e) * std::log(2.0);
}

struct Bracket {
  double log_hi, log_lo, log_alpha;

  /* alpha^(n-2) <= D <= alpha^(n-1) gives n - 1 <= L + 1 and n - 1 >= L with
   * L = log D / log alpha; one extra unit each side absorbs double rounding,
   * whose error here is far below 1e-3. */
  NRange cut(NRange r, long x) const {
    double ld = x * log_hi + std::log1p(-std::exp(x * (log_lo - log_hi)));
    double L = ld / log_alpha;
    long lo = static_cast<long>(std::floor(L + 1.0)) - 1;
    long hi = static_cast<long>(std::ceil(L + 2.0)) + 1;
    return {std::max(r.lo, lo), std::min(r.hi, hi)};
  }
};

void search_pair_modular(const Pair& pr, const SearchWindow& w, const SearchOptions& o,
                         std::vector<SolutionRecord>& found, SearchStats& st) {
  const simd::Kernels& kern = simd::active_kernels();
  const mpz_class f_hi = kfib_at(pr.k, pr.m + 1), f_lo = kfib_at(pr.k, pr.m - 1);
  simd::ResidueState state = simd::initial_state(static_cast<std::size_t>(pr.k), w.moduli);
  std::uint64_t a[simd::kLanes], b[simd::kLanes], ax[simd::kLanes], bx[simd::kLanes], target[simd::kLanes];
  for (std::size_t l = 0; l < simd::kLanes; ++l) {
    const std::uint64_t p = state.p[l];
    a[l] = mod64::reduce(f_hi, p);
    b[l] = mod64::reduce(f_lo, p);
    ax[l] = mod64::pow(a[l], static_cast<std::uint64_t>(w.x_range.lo), p);
    bx[l] = mod64::pow(b[l], static_cast<std::uint64_t>(w.x_range.lo), p);
  }
  Bracket br{log_mpz(f_hi), log_mpz(f_lo), 0.0};
  if (o.size_bracket) br.log_alpha = std::log(dominant_root(pr.k, 64).to_double());

  std::vector<std::uint64_t> rows;
  long base = state.next_index;  // index of rows[0]
  const long n_end = pr.m * w.x_range.hi + 1;
  std::uint32_t hits[64];

  for (long x = w.x_range.lo; x <= w.x_range.hi; ++x) {
    NRange r = n_range(pr.m, x);
    if (o.size_bracket) r = br.cut(r, x);
    if (r.lo <= r.hi) {
      if (state.next_index <= r.hi) {
        long steps = std::max(r.hi - state.next_index + 1, std::min<long>(4096, n_end - state.next_index + 1));
        std::size_t old = rows.size();
        rows.resize(old + static_cast<std::size_t>(steps) * simd::kLanes);
        kern.advance(state, static_cast<std::size_t>(steps), rows.data() + old);
      }
      if (r.lo - base > 65536 && static_cast<std::size_t>(r.lo - base) * simd::kLanes * 2 > rows.size()) {
        rows.erase(rows.begin(), rows.begin() + (r.lo - base) * static_cast<long>(simd::kLanes));
        base = r.lo;
      }
      for (std::size_t l = 0; l < simd::kLanes; ++l) target[l] = mod64::sub(ax[l], bx[l], state.p[l]);
      const std::size_t count = static_cast<std::size_t>(r.hi - r.lo + 1);
      std::size_t nh = kern.match(rows.data() + static_cast<std::size_t>(r.lo - base) * simd::kLanes, count, target,
                                  hits, 64);
      ++st.cells;
      st.rows_compared += static_cast<long>(count);
      st.modular_survivors += static_cast<long>(nh);
      if (nh > 64) throw Error("too many modular survivors; the modulus set is too weak");
      if (nh > 0) {
        mpz_class hx, lx;
        mpz_pow_ui(hx.get_mpz_t(), f_hi.get_mpz_t(), static_cast<unsigned long>(x));
        mpz_pow_ui(lx.get_mpz_t(), f_lo.get_mpz_t(), static_cast<unsigned long>(x));
        const mpz_class d = hx - lx;
        for (std::size_t h = 0; h < nh; ++h) {
          long n = r.lo + static_cast<long>(hits[h]);
          ++st.exact_checks;
          if (kfib_at(pr.k, n) == d) found.push_back({pr.k, pr.m, n, x, true});
        }
      }
    }
    for (std::size_t l = 0; l < simd::kLanes; ++l) {
      ax[l] = mod64::mul(ax[l], a[l], state.p[l]);
      bx[l] = mod64::mul(bx[l], b[l], state.p[l]);
    }
  }
}

void search_pair_exact(const Pair& pr, const SearchWindow& w, const SearchOptions& o,
                       std::vector<SolutionRecord>& found, SearchStats& st) {
  const std::vector<mpz_class> table = kfib_table(pr.k, pr.m * w.x_range.hi + 1);
  const mpz_class& f_hi = table[static_cast<std::size_t>(pr.m + 1)];
  const mpz_class& f_lo = table[static_cast<std::size_t>(pr.m - 1)];
  Bracket br{log_mpz(f_hi), log_mpz(f_lo), 0.0};
  if (o.size_bracket) br.log_alpha = std::log(dominant_root(pr.k, 64).to_double());
  for (long x = w.x_range.lo; x <= w.x_range.hi; ++x) {
    NRange r = n_range(pr.m, x);
    if (o.size_bracket) r = br.cut(r, x);
    ++st.cells;
    if (r.lo > r.hi) continue;
    mpz_class hx, lx;
    mpz_pow_ui(hx.get_mpz_t(), f_hi.get_mpz_t(), static_cast<unsigned long>(x));
    mpz_pow_ui(lx.get_mpz_t(), f_lo.get_mpz_t(), static_cast<unsigned long>(x));
    const mpz_class d = hx - lx;
    for (long n = r.lo; n <= r.hi; ++n) {
      ++st.rows_compared;
      ++st.exact_checks;
      if (table[static_cast<std::size_t>(n)] == d) found.push_back({pr.k, pr.m, n, x, true});
    }
  }
}

}  // namespace

double estimate_search_work(const SearchWindow& w, const SearchOptions& o) {
  validate(w, o);
  double work = 0;
  const double xs = static_cast<double>(w.x_range.hi - w.x_range.lo + 1);
  const double xsum = (static_cast<double>(w.x_range.lo) + w.x_range.hi) * xs / 2;
  for (const Pair& pr : pairs_of(w)) {
    const double stream = static_cast<double>(pr.m) * w.x_range.hi + 1;
    const double scan = o.size_bracket ? 5 * xs : 2 * xsum;
    // exact mode pays for big integers roughly in proportion to their length
    const double scale = w.moduli.empty() ? 1 + 0.01 * stream : 1;
    work += (stream + scan) * scale;
  }
  return work;
}

SearchResult exhaustive_search(const SearchWindow& w, const SearchOptions& o) {
  const double work = estimate_search_work(w, o);
  if (work > o.budget)
    throw WindowTooLarge("estimated work " + std::to_string(work) + " exceeds the budget " + std::to_string(o.budget) +
                         "; shard the window");
  const std::vector<Pair> pairs = pairs_of(w);
  std::vector<std::vector<SolutionRecord>> per(pairs.size());
  std::vector<SearchStats> stats(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    if (w.moduli.empty())
      search_pair_exact(pairs[i], w, o, per[i], stats[i]);
    else
      search_pair_modular(pairs[i], w, o, per[i], stats[i]);
  });
  SearchResult res;
  res.kernel = w.moduli.empty() ? "exact" : simd::active_kernels().name;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    res.solutions.insert(res.solutions.end(), per[i].begin(), per[i].end());
    res.stats.cells += stats[i].cells;
    res.stats.rows_compared += stats[i].rows_compared;
    res.stats.modular_survivors += stats[i].modular_survivors;
    res.stats.exact_checks += stats[i].exact_checks;
  }
  return res;
}

}  // namespace kfib
