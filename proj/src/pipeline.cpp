#include "kfib/pipeline.hpp"

#include <sstream>

#include "kfib/contfrac.hpp"
#include "kfib/final_min.hpp"
#include "kfib/heights.hpp"
#include "kfib/reduction.hpp"
#include "kfib/roots.hpp"
#include "kfib/search.hpp"
#include "kfib/sequence.hpp"

namespace kfib {

using num::Ball;

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names{"kfib-identities", "root",    "heights", "bound-chain",
                                              "dp-reduction",    "search",  "legendre", "final-min"};
  return names;
}

namespace {

long global_bits(const Config& c) { return c.get_long("global", "bits", num::kDefaultBits); }

long stage_bits(const Config& c, const std::string& stage, long fallback) {
  return c.get_long(stage, "bits", std::max(fallback, global_bits(c)));
}

num::PrecisionPolicy policy_for(const Config& c, long initial) {
  num::PrecisionPolicy p;
  p.initial_bits = initial;
  p.max_bits = std::max(initial, c.get_long("global", "max_bits", 1L << 20));
  return p;
}

ChainOptions chain_options(const Config& c) {
  ChainOptions o;
  for (const auto& [k, v] : c.section("bound-chain.constants")) o.constants.set(k, v);
  o.x_min = c.get_long("bound-chain", "x_min", o.x_min);
  o.bits = stage_bits(c, "bound-chain", o.bits);
  return o;
}

std::string range_str(IntRange r) { return std::to_string(r.lo) + ".." + std::to_string(r.hi); }

void verdict_from(Certificate& cert, bool ok) { cert.verdict = ok ? Verdict::Verified : Verdict::Failed; }

// ------------------------------------------------------------------ stages

void stage_identities(const Config& c, Certificate& cert) {
  const IntRange kr = c.get_range("kfib-identities", "k", {2, 100});
  const IntRange rk = c.get_range("kfib-identities", "ratio_k", {3, 30});
  const IntRange rm = c.get_range("kfib-identities", "ratio_m", {3, 300});
  if (kr.lo < 2 || rk.lo < 3 || rm.lo < 3) throw ConfigInvalid("kfib-identities needs k >= 2 and ratio ranges >= 3");
  cert.param("k", range_str(kr));
  cert.param("ratio_k", range_str(rk));
  cert.param("ratio_m", range_str(rm));

  long checks = 0, failures = 0;
  for (long k = kr.lo; k <= kr.hi; ++k) {
    const int ki = static_cast<int>(k);
    const std::vector<mpz_class> f = kfib_table(ki, 3 * k + 10);
    for (long n = 2; n <= k + 1; ++n) {
      mpz_class p;
      mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(n - 2));
      ++checks;
      failures += f[static_cast<std::size_t>(n)] != p;
    }
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k));
    ++checks;
    failures += f[static_cast<std::size_t>(k + 2)] != p - 1;
    for (long n = k + 2; n <= 3 * k + 10; ++n) {
      ++checks;
      failures += f[static_cast<std::size_t>(n)] != 2 * f[static_cast<std::size_t>(n - 1)] -
                                                      (n - k - 1 >= 0 ? f[static_cast<std::size_t>(n - k - 1)] : 0);
    }
  }
  long ratio_checks = 0, ratio_failures = 0;
  for (long k = rk.lo; k <= rk.hi; ++k)
    for (long m = rm.lo; m <= rm.hi; ++m) {
      ++ratio_checks;
      ratio_failures += !ratio_check(static_cast<int>(k), m);
    }
  cert.add(exact_quantity("identity_checks", checks));
  cert.add(exact_quantity("identity_failures", failures));
  cert.add(exact_quantity("ratio_checks", ratio_checks));
  cert.add(exact_quantity("ratio_failures", ratio_failures));
  verdict_from(cert, failures == 0 && ratio_failures == 0);
}

void stage_root(const Config& c, Certificate& cert) {
  const IntRange kr = c.get_range("root", "k", {2, 30});
  const IntRange nr = c.get_range("root", "n", {1, 300});
  if (kr.lo < 2 || nr.lo < 1) throw ConfigInvalid("root needs k >= 2 and n >= 1");
  const long bits = stage_bits(c, "root", num::kDefaultBits);
  cert.param("k", range_str(kr));
  cert.param("n", range_str(nr));
  cert.param("bits", std::to_string(bits));
  long checks = 0, failures = 0;
  for (long k = kr.lo; k <= kr.hi; ++k) {
    const int ki = static_cast<int>(k);
    const std::vector<mpz_class> f = kfib_table(ki, nr.hi);
    bool ok = num::with_escalation(policy_for(c, bits), [&](long b) {
      KFibContext ctx = KFibContext::build(ki, b);
      const Ball half = Ball::from_rational(mpq_class(1, 2), ctx.alpha.precision());
      bool all = true;
      for (long n = nr.lo; n <= nr.hi; ++n) {
        const mpz_class& fn = f[static_cast<std::size_t>(n)];
        all &= size_bounds_hold(ctx, n, fn);
        all &= num::certified_lt(abs(binet_error(ctx, n, fn)), half);
      }
      if (k == kr.lo || k == kr.hi || k == 3) {
        cert.add(ball_quantity("alpha_" + std::to_string(k), ctx.alpha));
        cert.add(ball_quantity("g_" + std::to_string(k), ctx.g));
      }
      return all;
    });
    checks += 2 * (nr.hi - nr.lo + 1);
    failures += !ok;
    cert.add(exact_quantity("norm_g_" + std::to_string(k), g_norm(ki)));
  }
  cert.add(exact_quantity("checks", checks));
  cert.add(exact_quantity("orders_failing", failures));
  verdict_from(cert, failures == 0);
}

void stage_heights(const Config& c, Certificate& cert) {
  const long k = c.get_long("heights", "k", 3);
  const long m = c.get_long("heights", "m", 3);
  if (k < 2 || m < 3) throw ConfigInvalid("heights needs k >= 2 and m >= 3");
  const long bits = global_bits(c);
  cert.param("k", std::to_string(k));
  cert.param("m", std::to_string(m));
  KFibContext ctx = KFibContext::build(static_cast<int>(k), bits);
  HeightConstants h = log_height_constants(ctx, m);
  cert.add(ball_quantity("h_alpha", h.h_alpha));
  cert.add(ball_quantity("h_g_bound", h.h_g_bound));
  cert.add(ball_quantity("h_F", h.h_F));

  // minimal-polynomial route against the unit formula for k = 2, 3
  KFibContext c2 = KFibContext::build(2, bits), c3 = KFibContext::build(3, bits);
  Ball h2 = log_height_from_minpoly({1, -1, -1}, bits);
  Ball h3 = log_height_from_minpoly({1, -1, -1, -1}, bits);
  cert.add(ball_quantity("h_golden_minpoly", h2));
  cert.add(ball_quantity("h_alpha3_minpoly", h3));
  bool ok = h2.overlaps(c2.log_alpha / 2) && h3.overlaps(c3.log_alpha / 3);
  ok &= num::certified_le(h.h_F, Ball::exact(m, bits) * ctx.log_alpha);
  ok &= num::certified_lt(h.h_alpha, Ball::from_rational(mpq_class(7, 10 * k), bits));
  verdict_from(cert, ok);
}

void stage_chain(const Config& c, Certificate& cert, PipelineState* state) {
  const Scenario sc = scenario_from_string(c.get("bound-chain", "scenario", "small_m"));
  ChainOptions o = chain_options(c);
  cert.param("scenario", to_string(sc));
  cert.param("x_min", std::to_string(o.x_min));
  cert.param("bits", std::to_string(o.bits));
  for (const auto& [k, v] : c.section("bound-chain.constants")) cert.param("constant." + k, v);

  BoundChainReport r = run_bound_chain(sc, o);
  for (const ChainStage& s : r.stages) {
    cert.add(ball_quantity("stage." + s.name + ".lhs", s.lhs));
    cert.add(ball_quantity("stage." + s.name + ".rhs", s.rhs));
    cert.add(flag_quantity("stage." + s.name + ".holds", s.holds));
  }
  if (r.x_bound) cert.add(ball_quantity("x_bound", *r.x_bound));
  if (r.n_bound) cert.add(ball_quantity("n_bound", *r.n_bound));
  if (r.m_bound) cert.add(ball_quantity("m_bound", *r.m_bound));
  if (r.ok()) {
    cert.add(exact_quantity("k_bound", r.k_bound));
    cert.add(exact_quantity("m_range_lo", r.m_range.lo));
    cert.add(exact_quantity("m_range_hi", r.m_range.hi));
  }
  cert.notes = r.notes;
  if (!r.ok()) {
    cert.verdict = Verdict::Failed;
    cert.error = ChainBroken(*r.broken_stage, r.broken_detail).what();
    return;
  }
  cert.verdict = Verdict::Verified;
  if (state) (sc == Scenario::SmallM ? state->small_chain : state->large_chain) = r;
}

void stage_reduction(const Config& c, Certificate& cert, PipelineState* state) {
  const mpz_class M = c.get_integer("dp-reduction", "M", "2.64e35");
  const long index = c.get_long("dp-reduction", "index", 700);
  if (M <= 0) throw ConfigInvalid("dp-reduction needs M > 0");
  if (index < 0) throw ConfigInvalid("dp-reduction needs index >= 0");
  ReductionOptions o;
  o.policy = policy_for(c, stage_bits(c, "dp-reduction", num::kDefaultBits));
  o.fixed_index = c.get_long("dp-reduction", "search_index", 1) == 0;
  o.index_cap = c.get_long("dp-reduction", "index_cap", std::max(2000L, index + 200));
  cert.param("M", M.get_str());
  cert.param("index", std::to_string(index));
  cert.param("search_index", o.fixed_index ? "0" : "1");

  if (state && state->small_chain && state->small_chain->n_bound) {
    const mpq_class nb = state->small_chain->n_bound->upper_q();
    cert.add(ball_quantity("chain_n_bound", *state->small_chain->n_bound));
    if (mpq_class(M) < nb) {
      cert.verdict = Verdict::Failed;
      cert.error = "M is below the certified n bound of the small-m chain";
      return;
    }
  }

  GridReport g;
  if (c.has("dp-reduction", "k_list") || c.has("dp-reduction", "m_list")) {
    std::vector<long> kl = c.get_list("dp-reduction", "k_list", {3});
    std::vector<long> ml = c.get_list("dp-reduction", "m_list", {3});
    cert.param("k_list", c.get("dp-reduction", "k_list", "3"));
    cert.param("m_list", c.get("dp-reduction", "m_list", "3"));
    g = dp_reduce_cells(std::vector<int>(kl.begin(), kl.end()), ml, M, index, o);
  } else {
    const IntRange kr = c.get_range("dp-reduction", "k", {3, 5});
    const IntRange mr = c.get_range("dp-reduction", "m", {3, 30});
    if (kr.lo < 2 || mr.lo < 2) throw ConfigInvalid("dp-reduction needs k, m >= 2");
    cert.param("k", range_str(kr));
    cert.param("m", range_str(mr));
    g = dp_reduce_grid(mr, kr, M, index, o);
  }
  for (const GridCell& cell : g.cells) {
    const std::string tag = "cell." + std::to_string(cell.k) + "." + std::to_string(cell.m);
    if (!cell.outcome) {
      cert.notes.push_back(tag + ": " + cell.error);
      continue;
    }
    const ReductionOutcome& o2 = *cell.outcome;
    cert.add(exact_quantity(tag + ".index", o2.convergent_index));
    cert.add(exact_quantity(tag + ".q", o2.q));
    cert.add(ball_quantity(tag + ".epsilon", o2.epsilon));
    cert.add(exact_quantity(tag + ".u_bound", o2.u_bound));
    if (!o2.rejected_indices.empty())
      cert.notes.push_back(tag + ": eps <= 0 at " + std::to_string(o2.rejected_indices.size()) + " earlier indices");
  }
  cert.add(exact_quantity("cells", static_cast<long>(g.cells.size())));
  cert.add(exact_quantity("skipped_k_above_m", g.skipped));
  cert.add(exact_quantity("failures", g.failures));
  if (g.failures == 0 && !g.cells.empty()) {
    cert.add(exact_quantity("min_q", g.min_q));
    cert.add(exact_quantity("max_q", g.max_q));
    cert.add(ball_quantity("min_epsilon", *g.min_epsilon));
    cert.add(exact_quantity("max_u_bound", g.max_u_bound));
  }
  verdict_from(cert, g.failures == 0);
}

std::vector<std::uint64_t> parse_moduli(const std::string& text) {
  if (text == "default") return default_moduli();
  if (text == "none" || text.empty()) return {};
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_integer(item).get_ui());
  return out;
}

void stage_search(const Config& c, Certificate& cert) {
  SearchWindow w;
  w.k_range = c.get_range("search", "k", {3, 5});
  w.m_range = c.get_range("search", "m", {3, 30});
  w.x_range = c.get_range("search", "x", {2, 30});
  w.moduli = parse_moduli(c.get("search", "moduli", "default"));
  SearchOptions o;
  o.budget = static_cast<double>(c.get_long("search", "budget", static_cast<long>(o.budget)));
  o.size_bracket = c.get_long("search", "size_bracket", 0) != 0;
  o.allow_outside_theorem = c.get_long("search", "controls", 0) != 0;
  cert.param("k", range_str(w.k_range));
  cert.param("m", range_str(w.m_range));
  cert.param("x", range_str(w.x_range));
  cert.param("moduli", c.get("search", "moduli", "default"));
  cert.param("size_bracket", o.size_bracket ? "1" : "0");
  cert.param("controls", o.allow_outside_theorem ? "1" : "0");

  SearchResult r = exhaustive_search(w, o);
  cert.param("kernel", r.kernel);
  cert.add(exact_quantity("cells", r.stats.cells));
  cert.add(exact_quantity("rows_compared", r.stats.rows_compared));
  cert.add(exact_quantity("modular_survivors", r.stats.modular_survivors));
  cert.add(exact_quantity("exact_checks", r.stats.exact_checks));
  cert.add(exact_quantity("solutions", static_cast<long>(r.solutions.size())));
  for (std::size_t i = 0; i < r.solutions.size(); ++i) {
    const SolutionRecord& s = r.solutions[i];
    cert.add({"solution." + std::to_string(i), Quantity::Kind::Exact,
              "k=" + std::to_string(s.k) + ",m=" + std::to_string(s.m) + ",n=" + std::to_string(s.n) +
                  ",x=" + std::to_string(s.x),
              {}, 0});
  }
  verdict_from(cert, r.solutions.empty() || o.allow_outside_theorem);
}

void stage_legendre(const Config& c, Certificate& cert) {
  const IntRange kr = c.get_range("legendre", "k", {3, 242});
  // terms = N expands a_0..a_N and checks q_{N-1}
  const long terms = c.get_long("legendre", "terms", 231);
  if (kr.lo < 2) throw ConfigInvalid("legendre needs k >= 2");
  if (terms < 1) throw ConfigInvalid("legendre needs terms >= 1");
  const ChainOptions co = chain_options(c);
  cert.param("k", range_str(kr));
  cert.param("terms", std::to_string(terms));
  LegendreScan s = legendre_scan(static_cast<int>(kr.lo), static_cast<int>(kr.hi), terms + 1,
                                 policy_for(c, stage_bits(c, "legendre", 1024)));
  const Ball q_min = Ball::from_decimal(co.constants.get("q_min"));
  const Ball a_max = Ball::from_decimal(co.constants.get("a_max"));
  const std::string qi = std::to_string(terms - 1);
  cert.add(exact_quantity("min_q" + qi, s.min_q));
  cert.add(exact_quantity("min_q_k", static_cast<long>(s.argmin_q_k)));
  cert.add(exact_quantity("max_partial_quotient", s.max_a));
  cert.add(exact_quantity("max_partial_quotient_k", static_cast<long>(s.argmax_a_k)));
  cert.add(exact_quantity("reference_q_min", q_min.mid_q()));
  cert.add(exact_quantity("reference_a_max", a_max.mid_q()));
  const bool ok = mpq_class(s.min_q) > q_min.mid_q() && mpq_class(s.max_a) < a_max.mid_q();
  verdict_from(cert, ok);
}

void stage_final(const Config& c, Certificate& cert) {
  const IntRange kr = c.get_range("final-min", "k", {3, 5});
  const IntRange xr = c.get_range("final-min", "x", {20, 150});
  const std::string which = c.get("final-min", "variant", "both");
  const long bits = stage_bits(c, "final-min", num::kDefaultBits);
  cert.param("k", range_str(kr));
  cert.param("x", range_str(xr));
  cert.param("variant", which);
  std::vector<DenominatorVariant> vs;
  if (which == "both")
    vs = {DenominatorVariant::ExpX, DenominatorVariant::Exp2X};
  else
    vs = {variant_from_string(which)};
  const Ball threshold = Ball::from_decimal("0.0003", bits);
  bool any = false;
  for (DenominatorVariant v : vs) {
    FinalMinResult r = final_min_scan(xr, kr, v, bits);
    const std::string tag = std::string(to_string(v)) + ".";
    cert.add(ball_quantity(tag + "minimum", r.minimum));
    cert.add(exact_quantity(tag + "argmin_k", static_cast<long>(r.k)));
    cert.add(exact_quantity(tag + "argmin_x", r.x));
    cert.add(exact_quantity(tag + "argmin_t", r.t));
    cert.add(exact_quantity(tag + "m_bound", r.m_bound));
    const bool above = num::certified_lt(threshold, r.minimum);
    cert.add(flag_quantity(tag + "above_threshold", above));
    any |= above;
  }
  verdict_from(cert, any);
}

}  // namespace

Certificate run_stage(const std::string& stage, const Config& config, PipelineState* state) {
  Certificate cert;
  cert.stage = stage;
  cert.timestamp = utc_timestamp();
  try {
    if (stage == "kfib-identities")
      stage_identities(config, cert);
    else if (stage == "root")
      stage_root(config, cert);
    else if (stage == "heights")
      stage_heights(config, cert);
    else if (stage == "bound-chain")
      stage_chain(config, cert, state);
    else if (stage == "dp-reduction")
      stage_reduction(config, cert, state);
    else if (stage == "search")
      stage_search(config, cert);
    else if (stage == "legendre")
      stage_legendre(config, cert);
    else if (stage == "final-min")
      stage_final(config, cert);
    else
      throw ConfigInvalid("unknown stage '" + stage + "'");
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const ChainBroken& e) {
    cert.verdict = Verdict::Failed;
    cert.error = e.what();
  } catch (const Error& e) {
    cert.verdict = Verdict::Error;
    cert.error = e.what();
  }
  return cert;
}

std::vector<PlanStep> pipeline_plan() {
  return {{"kfib-identities", ""}, {"root", ""},        {"heights", ""},          {"bound-chain", "small_m"},
          {"dp-reduction", ""},    {"search", ""},      {"bound-chain", "large_m"}, {"legendre", ""},
          {"final-min", ""}};
}

std::string describe_plan(const Config& config) {
  std::ostringstream out;
  int i = 1;
  for (const PlanStep& s : pipeline_plan()) {
    out << i++ << ". " << s.stage;
    if (!s.scenario.empty()) out << " (" << s.scenario << ")";
    for (const auto& [k, v] : config.section(s.stage))
      if (k != "scenario") out << " " << k << "=" << v;
    if (s.stage == "bound-chain")
      for (const auto& [k, v] : config.section("bound-chain.constants")) out << " " << k << "=" << v;
    out << "\n";
  }
  return out.str();
}

std::vector<Certificate> run_pipeline(const Config& config,
                                      const std::function<void(const Certificate&)>& on_certificate) {
  std::vector<Certificate> out;
  PipelineState state;
  for (const PlanStep& s : pipeline_plan()) {
    Config step = config;
    if (!s.scenario.empty()) step.set("bound-chain", "scenario", s.scenario);
    Certificate cert = run_stage(s.stage, step, &state);
    if (on_certificate) on_certificate(cert);
    out.push_back(cert);
    if (cert.verdict != Verdict::Verified) break;
  }
  return out;
}

}  // namespace kfib
