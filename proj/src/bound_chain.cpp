#include "kfib/bound_chain.hpp"

#include <sstream>

#include "kfib/heights.hpp"
#include "kfib/roots.hpp"

namespace kfib {

using num::Ball;

const char* to_string(Scenario s) { return s == Scenario::SmallM ? "small_m" : "large_m"; }

Scenario scenario_from_string(const std::string& name) {
  if (name == "small_m" || name == "small") return Scenario::SmallM;
  if (name == "large_m" || name == "large") return Scenario::LargeM;
  throw ConfigInvalid("unknown scenario '" + name + "'");
}

ChainConstants::ChainConstants()
    : values_{
          // shared Matveev prefix
          {"matveev_coeff", "1.04e12"},
          {"t_coeff", "1.1e12"},
          {"log_t_absorb", "28"},
          {"x_coeff", "7.1e13"},
          // small m
          {"small_m_max", "1457"},
          {"small_x", "1.81e32"},
          {"small_n", "2.63e35"},
          {"small_k", "74"},
          {"dp_A", "3.01"},
          // large m
          {"large_m_min", "1458"},
          {"c_211", "2.11"},
          {"c_311", "3.11"},
          {"lmn_coeff", "97.4"},
          {"lmn_ratio", "174.1"},
          {"x_branch21", "7.7e4"},
          {"m_branch21", "1.55e5"},
          {"t_branch_log", "3.5e2"},
          {"abs_72", "72"},
          {"x_branch_log", "1.01e5"},
          {"abs_110", "1.1e2"},
          {"t_branch_m", "7.72e4"},
          {"abs_180", "1.8e2"},
          {"m_large", "5.6e7"},
          {"abs_4700", "4.7e3"},
          {"x_large", "1.85e56"},
          {"x_abs", "2.27e105"},
          {"k_abs", "242"},
          {"lambda2", "1.9e-10"},
          {"legendre_den", "4.14e70"},
          {"a_max", "4.09e70"},
          {"q_min", "3.88e109"},
          {"final_x_max", "150"},
      } {}

void ChainConstants::set(const std::string& name, const std::string& decimal) {
  auto it = values_.find(name);
  if (it == values_.end()) throw ConfigInvalid("unknown chain constant '" + name + "'");
  try {
    (void)Ball::from_decimal(decimal, 64);
  } catch (const Error&) {
    throw ConfigInvalid("constant '" + name + "' is not a decimal: '" + decimal + "'");
  }
  it->second = decimal;
}

const std::string& ChainConstants::get(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw ConfigInvalid("unknown chain constant '" + name + "'");
  return it->second;
}

namespace {

struct Stop {};

class Chain {
 public:
  Chain(BoundChainReport& report, const ChainOptions& options)
      : r_(report), o_(options), bits_(options.bits) {}

  long bits() const { return bits_; }
  Ball pub(const std::string& name) const { return Ball::from_decimal(o_.constants.get(name), bits_); }
  mpq_class pub_q(const std::string& name) const { return num::parse_decimal(o_.constants.get(name)); }
  long pub_long(const std::string& name) const {
    mpq_class v = pub_q(name);
    if (v.get_den() != 1 || !v.get_num().fits_slong_p())
      throw ConfigInvalid("chain constant '" + name + "' must be an integer");
    return v.get_num().get_si();
  }
  Ball dec(std::string_view t) const { return Ball::from_decimal(t, bits_); }
  Ball n(long v) const { return Ball::exact(v, bits_); }
  Ball q(const mpq_class& v) const { return Ball::from_rational(v, bits_); }

  void lt(const std::string& name, const std::string& claim, const Ball& lhs, const Ball& rhs,
          const std::string& note = {}) {
    check(name, claim, lhs, rhs, true, note);
  }
  void le(const std::string& name, const std::string& claim, const Ball& lhs, const Ball& rhs,
          const std::string& note = {}) {
    check(name, claim, lhs, rhs, false, note);
  }
  // rational claims, decided exactly
  void le_exact(const std::string& name, const std::string& claim, const mpq_class& lhs, const mpq_class& rhs) {
    const bool ok = lhs <= rhs;
    r_.stages.push_back({name, claim, q(lhs), q(rhs), false, ok, {}});
    if (!ok) fail(name, claim + " is false: " + lhs.get_str() + " > " + rhs.get_str());
  }
  void lt_exact(const std::string& name, const std::string& claim, const mpq_class& lhs, const mpq_class& rhs) {
    const bool ok = lhs < rhs;
    r_.stages.push_back({name, claim, q(lhs), q(rhs), true, ok, {}});
    if (!ok) fail(name, claim + " is false: " + lhs.get_str() + " >= " + rhs.get_str());
  }
  void fail(const std::string& name, const std::string& detail) {
    r_.broken_stage = name;
    r_.broken_detail = detail;
    throw Stop{};
  }
  void note(std::string text) { r_.notes.push_back(std::move(text)); }

 private:
  void check(const std::string& name, const std::string& claim, const Ball& lhs, const Ball& rhs, bool strict,
             const std::string& note) {
    bool ok = false;
    std::string why;
    try {
      ok = strict ? num::certified_lt(lhs, rhs) : num::certified_le(lhs, rhs);
    } catch (const PrecisionExhausted& e) {
      why = " (undecided: " + std::string(e.what()) + ")";
    }
    r_.stages.push_back({name, claim, lhs, rhs, strict, ok, note});
    if (!ok) fail(name, claim + " is false: lhs " + lhs.to_string(12) + ", rhs " + rhs.to_string(12) + why);
  }

  BoundChainReport& r_;
  const ChainOptions& o_;
  long bits_;
};

Ball sq(const Ball& a) { return a * a; }

/* Matveev on Lambda_1 through the Sanchez-Luca step; common to both ranges of m. */
void matveev_prefix(Chain& c) {
  const Ball log3 = log(c.n(3));
  const Ball log7 = log(c.n(7));
  const Ball ln2 = log(c.n(2));

  c.lt("height-bounds", "log alpha < log 2 < 0.7", ln2, c.dec("0.7"),
       "gives h(F_{m+1}) <= m log alpha < 0.7m and h(alpha) < 0.7/k");
  Ball e1 = exp(c.n(1));
  c.lt("log-n-bound", "(2 - e)^2 < 4", sq(2 - e1), c.n(4),
       "so e*y < (y+1)^2 for y > 0, i.e. 1 + log(n-1) < 2 log(mx+1) since n - 1 <= mx");

  // A_1 = 0.7km, A_2 = 0.7, A_3 = 3k log k at k = 3, m = 1, B = 1
  LinearFormInstance inst{3, {1, 1, 1}, {c.dec("2.1"), c.dec("0.7"), 9 * log3}, c.n(1)};
  Ball e_unit = matveev_exponent(inst);
  Ball per_k = e_unit / (81 * sq(log3));
  Ball coeff = (2 * per_k + ln2 / (3 * 81 * sq(log3) * log7)) / log(c.dec("2.3"));
  c.lt("matveev-coefficient", "(2E/(m k^4 (log k)^2 (1+log B)) + log 2 / ...) / log 2.3 < reference", coeff,
       c.pub("matveev_coeff"), "E/(m k^4 (log k)^2) is a constant times (1+log k)/log k, largest at k = 3; mx+1 >= 7");

  Ball tcoef = c.pub("matveev_coeff") + 1 / (log7 * 9 * 81 * sq(log3));
  c.lt("t-coefficient", "matveev coefficient + 1/(log 7 m^2 k^4 (log k)^2) < T coefficient", tcoef, c.pub("t_coeff"));
  Ball t_min = c.pub("t_coeff") * 9 * 81 * sq(log3);
  c.lt("sl-precondition-r1", "4 < T at m = k = 3", c.n(4), t_min);
  c.lt("log-t-coefficient", "log(T coefficient) < 28", log(c.pub("t_coeff")), c.pub("log_t_absorb"));
  Ball m3 = c.n(3);
  c.lt("log-t-absorption", "28 + 6 log m + 2 log log m < 32 log m at m = 3",
       c.pub("log_t_absorb") + 6 * log(m3) + 2 * log(log(m3)), 32 * log(m3),
       "26 log m - 2 log log m grows for m >= 3; uses k <= m");
  c.lt("x-coefficient", "2 * 32 * T coefficient < x coefficient", 64 * c.pub("t_coeff"), c.pub("x_coeff"));
}

void small_m(Chain& c, BoundChainReport& r) {
  const long m_max = c.pub_long("small_m_max");
  const Ball M = c.n(m_max);
  Ball xb = c.pub("x_coeff") * pow(M, 5) * pow(log(M), 3);
  c.lt("small-x", "x coefficient * m^5 (log m)^3 at the largest m < reference x bound", xb, c.pub("small_x"),
       "increasing in m");
  Ball nb = M * xb + 1;
  c.lt("small-n", "m x + 1 < reference n bound", nb, c.pub("small_n"));
  mpz_class kb = num::certified_floor(log(xb));
  c.le("small-k", "floor(log x) <= reference k bound", Ball::from_integer(kb, c.bits()), c.n(c.pub_long("small_k")),
       "k <= log x");

  // reduction set-up on Gamma_1 (x >= 3; x = 2 gives n <= 2m+1 and is searched directly)
  Ball lam3 = 2 / pow(c.dec("2.3"), 3);
  c.lt("gamma1-exponential", "2/2.3^3 < 1/3, so e^|Gamma_1| < 1.5 for x >= 3", lam3, c.q(mpq_class(1, 3)),
       "at x = 2 the bound is 0.378 and e^|Gamma_1| < 1.61 only");
  Ball a_const = 3 / log(c.n(4)) * pow(c.dec("2.3"), c.q(mpq_class(1, m_max)));
  c.lt("dp-constant-A", "3/log F_4 * 2.3^(1/1457) < A", a_const, c.pub("dp_A"), "F_{m+1} >= F_4 = 4 for k, m >= 3");

  r.x_bound = xb;
  r.n_bound = nb;
  r.k_bound = kb.get_si();
  r.m_range = {3, m_max};
  r.k_range = {3, kb.get_si()};
  c.note("the reduction runs with M = 2.64e35 while the certified n bound is " + nb.to_string(6));
}

void large_m(Chain& c, BoundChainReport& r, long x_min) {
  const long bits = c.bits();
  const Ball log3 = log(c.n(3));
  const Ball a_low = c.dec("1.75");
  const long m0 = c.pub_long("large_m_min");
  const Ball M0 = c.n(m0);

  if (x_min < 2) c.fail("x-min", "x_min must be at least 2");
  c.lt("x-min", "x_min - 1 < e^3", c.n(x_min - 1), exp(c.n(3)), "k >= 3 and k <= log x force x > e^3");

  KFibContext c3 = KFibContext::build(3, bits);
  c.le("alpha-lower", "7/4 <= 2(1 - 2^-3) < alpha(k) for k >= 3", a_low, c.q(root_lower_bracket(3)));
  c.lt("alpha3-minimal", "alpha(3) < 2(1 - 2^-4) < alpha(k) for k >= 4", c3.alpha, c.q(root_lower_bracket(4)));

  const long k_abs = c.pub_long("k_abs");
  {
    Ball g_lo = c3.g, g_hi = c3.g;
    mpq_class worst_norm = 0;
    for (int k = 3; k <= k_abs; ++k) {
      KFibContext ctx = k == 3 ? c3 : KFibContext::build(k, bits);
      g_lo = min(g_lo, ctx.g);
      g_hi = max(g_hi, ctx.g);
      worst_norm = std::max(worst_norm, g_norm(k));
    }
    c.lt("g-lower", "1/2 < g(k) for 3 <= k <= k bound", c.q(mpq_class(1, 2)), g_lo);
    c.lt("g-upper", "g(k) < 1 for 3 <= k <= k bound", g_hi, c.n(1), "so |log g| < log 2");
    c.lt("g-not-unit", "|N(g)| < 1 for 3 <= k <= k bound", c.q(worst_norm), c.n(1),
         "g is not a unit, hence multiplicatively independent of alpha");
  }

  c.lt("y-bound", "x coefficient * m^5 (log m)^3 < (7/4)^((m-1)/2) at the smallest m",
       c.pub("x_coeff") * pow(M0, 5) * pow(log(M0), 3), pow(a_low, c.q(mpq_class(m0 - 1, 2))),
       "the exponential side grows faster");
  c.lt("y-tiny", "(7/4)^-728 < 1e-30", 1 / pow(a_low, 728), c.dec("1e-30"));
  c.lt("two-alpha-2x", "2 (7/4)^(-2 x_min) < 0.1", 2 / pow(a_low, 2 * x_min), c.dec("0.1"));
  Ball tail = 2 * pow(c.q(mpq_class(1, 2)), x_min) * pow(a_low, c.q(mpq_class(2 * m0 * x_min - (m0 - 2), 2)));
  c.lt("binet-tail", "10^3 < 2 (1/2)^x (7/4)^(mx - (m-2)/2)", c.n(1000), tail,
       "increasing in x because (7/4)^m > 2, and in m");
  c.lt_exact("coefficient-2.11", "2 + 0.1 + 0.001 < 2.11", mpq_class(2101, 1000), c.pub_q("c_211"));
  c.le_exact("coefficient-3.11", "2.11 + 1 <= 3.11", c.pub_q("c_211") + 1, c.pub_q("c_311"));

  // two-logarithm step
  const Ball ln2 = log(c.n(2));
  c.lt("lmn-log-b1", "max{3 log 3, log 2/3, 1/3} < 4 log 3", max(3 * log3, max(ln2 / 3, c.q(mpq_class(1, 3)))),
       4 * log3, "both sides scale so k = 3 is the worst case");
  c.lt("lmn-log-b2", "log alpha < 1", ln2, c.n(1), "so log B_2 = 1/k");
  c.lt("lmn-b-prime", "1 + 2/(4 k log k) < 1.2 at k = 3", 1 + 2 / (12 * log3), c.dec("1.2"));
  c.lt("lmn-log-shift", "1.2 e^0.14 < 1.4", c.dec("1.2") * exp(c.dec("0.14")), c.dec("1.4"));
  c.lt("lmn-coefficient", "24.34 * 4 < 97.4", c.dec("24.34") * 4, c.pub("lmn_coeff"));
  {
    Ball worst = c.n(0);
    for (long k : {3L, 10L, 100L, 242L}) {
      for (long x : {x_min, 1000000L}) {
        Ball kb = c.n(k), xb = c.n(x);
        LmnBound e = lmn_exponent(static_cast<int>(k), 4 * log(kb), 1 / kb, c.dec("1.2") * xb);
        Ball h = max(max(log(c.dec("1.4") * xb), c.q(mpq_class(21, k))), c.q(mpq_class(1, 2)));
        worst = max(worst, e.exponent / (c.pub("lmn_coeff") * pow(kb, 3) * log(kb) * sq(h)));
      }
    }
    c.le("lmn-instantiation", "engine exponent / (97.4 k^3 log k H^2) <= 1 on sample points", worst, c.n(1));
  }
  c.lt("lmn-not-half", "1.02 < log(1.4 x_min)", c.dec("1.02"), log(c.dec("1.4") * x_min));
  Ball ratio = c.pub("lmn_coeff") / log(a_low);
  c.lt("lmn-over-log-alpha", "97.4 / log(7/4) < 174.1", ratio, c.pub("lmn_ratio"));
  Ball h_min = max(log(c.dec("1.4") * x_min), c.q(mpq_class(1, 2)));
  c.lt("lmn-additive", "log 3.11 / log(7/4) < slack of 174.1 times 27 log 3 H^2", log(c.pub("c_311")) / log(a_low),
       (c.pub("lmn_ratio") - ratio) * 27 * log3 * sq(h_min));

  // branch max = 21/k
  c.lt("branch21-x", "174.1 * 441 < 7.7e4", c.pub("lmn_ratio") * 441, c.pub("x_branch21"));
  c.lt("m-minus-two", "m/1.002 < m - 2 at the smallest m", M0 / c.dec("1.002"), M0 - 2);
  c.lt("branch21-m", "2 * 1.002 * 7.7e4 < 1.55e5", 2 * c.dec("1.002") * c.pub("x_branch21"), c.pub("m_branch21"));

  // branch max = log(1.4x)
  c.lt("log-1.4x", "log(1.4 x) < 1.4 log x at x = x_min", log(c.dec("1.4") * x_min), c.dec("1.4") * log(c.n(x_min)),
       "0.4 log x - log 1.4 increases; false at x = 2");
  c.lt("branch-log-t", "174.1 * 1.4^2 < 350", c.pub("lmn_ratio") * c.dec("1.96"), c.pub("t_branch_log"));
  c.lt("sl-precondition-log", "256 < 350 * 27 log 3", c.n(256), c.pub("t_branch_log") * 27 * log3);
  c.lt("branch-log-absorption", "(3 log k + log log k + log 350)^2 < 72 (log k)^2 at k = 3",
       sq(3 * log3 + log(log3) + log(c.pub("t_branch_log"))), c.pub("abs_72") * sq(log3), "ratio decreases in k");
  c.lt("branch-log-x", "4 * 350 * 72 < 1.01e5", 4 * c.pub("t_branch_log") * c.pub("abs_72"), c.pub("x_branch_log"));

  const Ball logM0 = log(M0);
  c.lt("branch-m-absorption", "(log(7.1e13) + 5 log m + 3 log log m)^2 < 110 (log m)^2 at the smallest m",
       sq(log(c.pub("x_coeff")) + 5 * logM0 + 3 * log(logM0)), c.pub("abs_110") * sq(logM0), "ratio decreases in m");
  c.lt("branch-m-coefficient", "1.002 * 2 * 350 * 110 < 7.72e4",
       c.dec("1.002") * 2 * c.pub("t_branch_log") * c.pub("abs_110"), c.pub("t_branch_m"));
  c.lt("sl-precondition-m", "256 < 7.72e4 * 27 log 3", c.n(256), c.pub("t_branch_m") * 27 * log3);
  c.lt("branch-m-absorption-k", "(log(7.72e4) + 3 log k + log log k)^2 < 180 (log k)^2 at k = 3",
       sq(log(c.pub("t_branch_m")) + 3 * log3 + log(log3)), c.pub("abs_180") * sq(log3), "ratio decreases in k");
  c.lt("m-large", "4 * 7.72e4 * 180 < 5.6e7", 4 * c.pub("t_branch_m") * c.pub("abs_180"), c.pub("m_large"));

  c.lt("compare-x-branches", "7.7e4 < 1.01e5 k^2 (log k)^2 at k = 3", c.pub("x_branch21"),
       c.pub("x_branch_log") * 9 * sq(log3));
  c.lt("compare-m-branches", "1.55e5 < 5.6e7 k^2 (log k)^2 at k = 3", c.pub("m_branch21"),
       c.pub("m_large") * 9 * sq(log3));

  // x in terms of k
  auto cube_lhs = [&](long k) {
    Ball lk = log(c.n(k));
    return pow(log(c.pub("m_large")) + 3 * lk + 3 * log(lk), 3);
  };
  auto cube_rhs = [&](long k) { return c.pub("abs_4700") * pow(log(c.n(k)), 3); };
  long k0 = 3;
  while (k0 <= k_abs && !(cube_lhs(k0).upper_q() < cube_rhs(k0).lower_q())) ++k0;
  if (k0 > k_abs) c.fail("x-large-absorption", "(log 5.6e7 + 3 log k + 3 log log k)^3 < 4.7e3 (log k)^3 never holds");
  c.lt("x-large-absorption",
       "(log 5.6e7 + 3 log k + 3 log log k)^3 < 4.7e3 (log k)^3 at k = " + std::to_string(k0), cube_lhs(k0),
       cube_rhs(k0), "ratio decreases in k");
  c.lt("x-large-coefficient", "7.1e13 * (5.6e7)^5 * 4.7e3 < 1.85e56",
       c.pub("x_coeff") * pow(c.pub("m_large"), 5) * c.pub("abs_4700"), c.pub("x_large"));

  Ball x_direct = c.n(0);
  if (k0 > 3) {
    for (long k = 3; k < k0; ++k) {
      Ball lk = log(c.n(k));
      Ball mk = c.pub("m_large") * pow(c.n(k), 3) * pow(lk, 3);
      x_direct = max(x_direct, c.pub("x_coeff") * pow(mk, 5) * pow(log(mk), 3));
    }
    c.note("the cube absorption fails for 3 <= k < " + std::to_string(k0) +
           "; those k are bounded directly by x < 7.1e13 m^5 (log m)^3 with m < 5.6e7 k^3 (log k)^3, giving x < " +
           x_direct.to_string(4));
    c.lt("x-direct-small-k", "direct bound for k below the absorption range < reference absolute x bound", x_direct,
         c.pub("x_abs"));
  }

  // x < c (log x)^15 (log log x)^18  <=>  phi(log x) < 0, phi increasing past log c
  const Ball log_c = log(c.pub("x_large"));
  auto phi = [&](const mpq_class& L) {
    Ball l = c.q(L);
    return l - log_c - 15 * log(l) - 18 * log(log(l));
  };
  mpq_class lo = log_c.upper_q();
  {
    Ball l = c.q(lo);
    c.lt("phi-increasing", "15/L + 18/(L log L) < 1 at L = log c", 15 / l + 18 / (l * log(l)), c.n(1));
  }
  if (!phi(lo).certainly_negative()) c.fail("x-absolute", "phi(log c) is not negative");
  mpq_class hi = 2 * lo;
  while (!phi(hi).certainly_positive()) hi *= 2;
  for (int i = 0; i < 80; ++i) {
    mpq_class mid = (lo + hi) / 2;
    Ball v = phi(mid);
    if (v.certainly_negative())
      lo = mid;
    else if (v.certainly_positive())
      hi = mid;
    else
      break;
  }
  Ball x_star = Ball::from_endpoints(exp(c.q(lo)).lower_q(), exp(c.q(hi)).upper_q(), bits);
  c.lt("x-absolute", "root of x = 1.85e56 (log x)^15 (log log x)^18 < reference absolute x bound", x_star,
       c.pub("x_abs"));
  Ball x_bound = max(x_star, x_direct);

  mpz_class kb = num::certified_floor(log(x_bound));
  c.le("k-large", "floor(log x) <= reference k bound", Ball::from_integer(kb, bits), c.n(k_abs), "k <= log x");
  c.note("log of the reference absolute x bound is " + log(c.pub("x_abs")).to_string(6) +
         ", so the k bound holds as k <= " + kb.get_str() + " rather than strictly");

  Ball lk = log(Ball::from_integer(kb, bits));
  Ball mb = c.pub("m_large") * pow(Ball::from_integer(kb, bits), 3) * pow(lk, 3);

  // Legendre preparation
  const Ball lambda = 1 / pow(c3.alpha, 2 * x_min) + c.pub("c_211") / pow(a_low, 728);
  c.lt("lambda2", "alpha(3)^(-2 x_min) + 2.11 (7/4)^-728 < 1.9e-10", lambda, c.pub("lambda2"),
       "uses alpha >= alpha(3); (7/4)^-40 alone is 1.90e-10");
  const Ball scale = 2 * c.pub("legendre_den") * (1 + c.pub("lambda2")) / c3.log_alpha;
  c.lt("legendre-gap-tail", "2 D (1+lambda)/log alpha * 2.11 x (7/4)^-728 < 1 up to the absolute x bound",
       scale * c.pub("c_211") * c.pub("x_abs") / pow(a_low, 728), c.n(1));
  const long x_leg = c.pub_long("final_x_max") + 1;
  c.lt("legendre-gap-x", "2 D (1+lambda)/log alpha * x alpha^(-2x) < 1 at x = final x range + 1",
       scale * x_leg / pow(c3.alpha, 2 * x_leg), c.n(1), "x alpha^(-2x) decreases");
  c.lt("legendre-den", "largest partial quotient + 2 < D", c.pub("a_max") + 2, c.pub("legendre_den"));
  c.lt("legendre-q", "absolute x bound < smallest q_230", c.pub("x_abs"), c.pub("q_min"));

  // window for t = mx + 1 - n when x <= final range
  const long x_fin = c.pub_long("final_x_max");
  mpz_class k_fin = num::certified_floor(log(c.n(x_fin)));
  const Ball lam = c.pub("lambda2");
  for (long k = 3; k <= k_fin.get_si(); ++k) {
    KFibContext ctx = k == 3 ? c3 : KFibContext::build(static_cast<int>(k), bits);
    Ball beta = log(1 / ctx.g) / ctx.log_alpha;
    Ball d_lo = log(1 + lam) / ctx.log_alpha;
    Ball d_hi = -log(1 - lam) / ctx.log_alpha;
    const std::string ks = std::to_string(k);
    c.lt("beta-range-k" + ks, "0.68 < beta", c.dec("0.68"), beta);
    c.lt("beta-range-upper-k" + ks, "beta < 1.27", beta, c.dec("1.27"));
    c.lt("t-window-lower-k" + ks, "0.68 x - 0.69 <= (x-1) beta - delta for x >= 20", beta + d_lo - c.dec("0.69"),
         (beta - c.dec("0.68")) * 20);
    c.lt("t-window-upper-k" + ks, "(x-1) beta + delta <= 1.27 x - 1.26 for x >= 20", c.dec("1.26") - beta + d_hi,
         (c.dec("1.27") - beta) * 20);
  }

  r.x_bound = x_bound;
  r.m_bound = mb;
  r.k_bound = kb.get_si();
  r.k_range = {3, kb.get_si()};
  r.m_range = {m0, num::certified_floor(mb).get_si()};
}

}  // namespace

BoundChainReport run_bound_chain(Scenario scenario, const ChainOptions& options) {
  BoundChainReport report;
  report.scenario = scenario;
  Chain chain(report, options);
  try {
    matveev_prefix(chain);
    if (scenario == Scenario::SmallM)
      small_m(chain, report);
    else
      large_m(chain, report, options.x_min);
  } catch (const Stop&) {
  }
  return report;
}

BoundChainReport bound_chain(Scenario scenario, const ChainOptions& options) {
  BoundChainReport report = run_bound_chain(scenario, options);
  if (!report.ok()) throw ChainBroken(*report.broken_stage, report.broken_detail);
  return report;
}

}  // namespace kfib
