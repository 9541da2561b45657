#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kfib/errors.hpp"
#include "kfib/pipeline.hpp"
#include "kfib/sequence.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string log_path;
  std::vector<std::string> overrides;
  bool dry_run = false;
  bool quiet = false;
};

// Flag value -> config key, applied only when the flag was given.
struct Binding {
  CLI::Option* opt;
  std::string section;
  std::string key;
  std::string* value;
};

// Long mantissas are cut for the terminal; the log keeps every digit.
std::string shorten(const std::string& v) {
  const auto e = v.find('e');
  const std::string mant = v.substr(0, e), tail = e == std::string::npos ? "" : v.substr(e);
  if (mant.size() <= 24) return v;
  if (tail.empty() && mant.find('.') == std::string::npos)
    return mant.substr(0, 12) + "... (" + std::to_string(mant.size()) + " digits)";
  return mant.substr(0, 20) + tail;
}

void print_summary(const kfib::Certificate& c, bool quiet) {
  std::cout << c.stage << ": " << kfib::to_string(c.verdict);
  if (!c.error.empty()) std::cout << " (" << c.error << ")";
  std::cout << "\n";
  if (quiet) return;
  for (const auto& q : c.quantities) {
    if (q.name.rfind("stage.", 0) == 0 || q.name.rfind("cell.", 0) == 0) continue;
    std::cout << "  " << q.name << " = " << shorten(q.value);
    if (q.kind == kfib::Quantity::Kind::Ball) std::cout << " +/- " << shorten(q.radius);
    std::cout << "\n";
  }
  for (const auto& n : c.notes) std::cout << "  note: " << n << "\n";
}

kfib::Config build_config(const Common& common, const std::vector<Binding>& bindings) {
  kfib::Config cfg = common.config_path.empty() ? kfib::Config::desk() : kfib::Config::load(common.config_path);
  for (const Binding& b : bindings)
    if (*b.opt) cfg.set(b.section, b.key, *b.value);
  for (const auto& o : common.overrides) cfg.apply_override(o);
  cfg.validate();
  return cfg;
}

std::string log_path_for(const Common& common, const kfib::Config& cfg) {
  return common.log_path.empty() ? cfg.get("global", "log", "") : common.log_path;
}

int run_one(const std::string& stage, const Common& common, const std::vector<Binding>& bindings,
            const std::string& scenario = {}) {
  kfib::Config cfg = build_config(common, bindings);
  if (!scenario.empty()) cfg.set("bound-chain", "scenario", scenario);
  if (common.dry_run) {
    std::cout << "stage " << stage << "\n";
    for (const std::string& sec : {stage, std::string(stage == "bound-chain" ? "bound-chain.constants" : "")})
      for (const auto& [k, v] : cfg.section(sec)) std::cout << "  " << sec << "." << k << " = " << v << "\n";
    return 0;
  }
  std::optional<kfib::CertificateLog> log;
  const std::string path = log_path_for(common, cfg);
  if (!path.empty()) log.emplace(path);
  kfib::Certificate c = kfib::run_stage(stage, cfg);
  if (log) log->write(c);
  print_summary(c, common.quiet);
  return kfib::exit_code(c.verdict);
}

int run_all(const Common& common, const std::vector<Binding>& bindings) {
  kfib::Config cfg = build_config(common, bindings);
  if (common.dry_run) {
    std::cout << kfib::describe_plan(cfg);
    return 0;
  }
  const std::string path = log_path_for(common, cfg);
  std::optional<kfib::CertificateLog> log;
  if (!path.empty()) log.emplace(path);
  auto certs = kfib::run_pipeline(cfg, [&](const kfib::Certificate& c) {
    if (log) log->write(c);
    print_summary(c, common.quiet);
  });
  for (const auto& c : certs)
    if (c.verdict != kfib::Verdict::Verified) return kfib::exit_code(c.verdict);
  return 0;
}

void add_common(CLI::App* app, Common& common) {
  app->add_option("--config", common.config_path, "TOML-style config file (default: built-in desk preset)");
  app->add_option("--log", common.log_path, "append certificates to this JSON Lines file");
  app->add_option("--set", common.overrides, "override section.key=value")->take_all();
  app->add_flag("--dry-run", common.dry_run, "print the plan, compute nothing");
  app->add_flag("-q,--quiet", common.quiet, "only print verdict lines");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-generalized Fibonacci power-difference verifier"};
  app.require_subcommand(1);
  Common common;

  std::string k, m, x, n, M, index, terms, bits, x_min, budget, variant, scenario = "small_m", moduli;
  bool exact = false, controls = false, size_bracket = false;
  long fib_n = -1;

  std::vector<Binding> fib_b, root_b, heights_b, bounds_b, reduce_b, legendre_b, search_b, final_b, pipe_b;

  auto* fib = app.add_subcommand("fib", "sequence identities, or print F_n with --n");
  add_common(fib, common);
  fib_b.push_back({fib->add_option("--k", k, "order or range a..b"), "kfib-identities", "k", &k});
  fib->add_option("--n", fib_n, "print the single term F_n of order --k");

  auto* root = app.add_subcommand("root", "dominant root, size bounds and the Binet estimate");
  add_common(root, common);
  root_b.push_back({root->add_option("--k", k, "order or range a..b"), "root", "k", &k});
  root_b.push_back({root->add_option("--n", n, "index or range a..b"), "root", "n", &n});
  root_b.push_back({root->add_option("--bits", bits, "initial working precision in bits"), "root", "bits", &bits});

  auto* heights = app.add_subcommand("heights", "logarithmic heights for one (k, m)");
  add_common(heights, common);
  heights_b.push_back({heights->add_option("--k", k, "order or range a..b"), "heights", "k", &k});
  heights_b.push_back({heights->add_option("--m", m, "m or range a..b"), "heights", "m", &m});

  auto* bounds = app.add_subcommand("bounds", "bound chain for one scenario");
  add_common(bounds, common);
  bounds->add_option("--scenario", scenario, "small_m or large_m")
      ->check(CLI::IsMember({"small_m", "large_m"}));
  bounds_b.push_back({bounds->add_option("--x-min", x_min, "lower bound on x assumed by the large-m chain"), "bound-chain", "x_min", &x_min});
  bounds_b.push_back({bounds->add_option("--bits", bits, "initial working precision in bits"), "bound-chain", "bits", &bits});

  auto* reduce = app.add_subcommand("reduce", "Dujella-Petho reduction over a (k, m) grid");
  add_common(reduce, common);
  reduce_b.push_back({reduce->add_option("--k", k, "order or range a..b"), "dp-reduction", "k", &k});
  reduce_b.push_back({reduce->add_option("--m", m, "m or range a..b"), "dp-reduction", "m", &m});
  reduce_b.push_back({reduce->add_option("--M", M, "upper bound on u, digits or a decimal such as 2.64e35"), "dp-reduction", "M", &M});
  reduce_b.push_back({reduce->add_option("--index", index, "convergent index; 0 searches from the first usable one"), "dp-reduction", "index", &index});
  reduce_b.push_back({reduce->add_option("--bits", bits, "initial working precision in bits"), "dp-reduction", "bits", &bits});

  auto* legendre = app.add_subcommand("legendre", "continued fractions of beta_k");
  add_common(legendre, common);
  legendre_b.push_back({legendre->add_option("--k", k, "order or range a..b"), "legendre", "k", &k});
  legendre_b.push_back({legendre->add_option("--terms", terms, "check q_{N-1}, quotients a_0..a_N"), "legendre",
                        "terms", &terms});
  legendre_b.push_back({legendre->add_option("--bits", bits, "initial working precision in bits"), "legendre", "bits", &bits});

  auto* search = app.add_subcommand("search", "exhaustive search of a finite window");
  add_common(search, common);
  search_b.push_back({search->add_option("--k", k, "order or range a..b"), "search", "k", &k});
  search_b.push_back({search->add_option("--m", m, "m or range a..b"), "search", "m", &m});
  search_b.push_back({search->add_option("--x", x, "x or range a..b"), "search", "x", &x});
  search_b.push_back({search->add_option("--moduli", moduli, "default, none, or p1,p2,..."), "search", "moduli",
                      &moduli});
  search_b.push_back({search->add_option("--budget", budget, "work estimate above which the window is refused"), "search", "budget", &budget});
  search->add_flag("--exact", exact, "no modular filter, exact integers only");
  search->add_flag("--controls", controls, "allow windows outside the theorem (k = 2, x = 1)");
  search->add_flag("--size-bracket", size_bracket, "restrict n by the size of D");

  auto* final_min = app.add_subcommand("final-min", "terminal minimisation");
  add_common(final_min, common);
  final_b.push_back({final_min->add_option("--k", k, "order or range a..b"), "final-min", "k", &k});
  final_b.push_back({final_min->add_option("--x", x, "x or range a..b"), "final-min", "x", &x});
  final_b.push_back({final_min->add_option("--variant", variant, "exp_x, exp_2x or both"), "final-min", "variant",
                     &variant});
  final_b.push_back({final_min->add_option("--bits", bits, "initial working precision in bits"), "final-min", "bits", &bits});

  auto* pipeline = app.add_subcommand("pipeline", "run every stage in order");
  add_common(pipeline, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (*fib) {
      if (fib_n >= 0) {
        const long order = k.empty() ? 2 : std::stol(k);
        if (order < 2) throw kfib::ConfigInvalid("--k must be >= 2");
        std::cout << kfib::kfib_at(static_cast<int>(order), fib_n).get_str() << "\n";
        return 0;
      }
      return run_one("kfib-identities", common, fib_b);
    }
    if (*root) return run_one("root", common, root_b);
    if (*heights) return run_one("heights", common, heights_b);
    if (*bounds) return run_one("bound-chain", common, bounds_b, scenario);
    if (*reduce) return run_one("dp-reduction", common, reduce_b);
    if (*legendre) return run_one("legendre", common, legendre_b);
    if (*search) {
      std::string on = "1";
      std::string none = "none";
      if (exact) search_b.push_back({search->get_option("--exact"), "search", "moduli", &none});
      if (controls) search_b.push_back({search->get_option("--controls"), "search", "controls", &on});
      if (size_bracket) search_b.push_back({search->get_option("--size-bracket"), "search", "size_bracket", &on});
      return run_one("search", common, search_b);
    }
    if (*final_min) return run_one("final-min", common, final_b);
    if (*pipeline) return run_all(common, pipe_b);
  } catch (const kfib::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
