#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "kfib/certificate.hpp"
#include "kfib/config.hpp"
#include "kfib/pipeline.hpp"

using kfib::num::Ball;

namespace {

kfib::Certificate sample() {
  kfib::Certificate c;
  c.stage = "root";
  c.param("k", "2..30");
  c.param("note", "quote \" and \\ and unicode \xc3\xa9");
  c.add(kfib::exact_quantity("big", mpz_class("123456789012345678901234567890")));
  c.add(kfib::exact_quantity("ratio", mpq_class(-22, 7)));
  c.add(kfib::flag_quantity("holds", true));
  c.add(kfib::ball_quantity("log2", log(Ball::exact(2, 300))));
  c.notes.push_back("first note");
  c.verdict = kfib::Verdict::Failed;
  c.error = "something";
  c.timestamp = kfib::utc_timestamp();
  return c;
}

}  // namespace

TEST_CASE("certificates round trip") {
  const kfib::Certificate c = sample();
  const std::string line = kfib::to_json_line(c);
  CHECK(line.find('\n') == std::string::npos);
  const kfib::Certificate back = kfib::from_json_line(line);
  CHECK(back == c);
  CHECK(kfib::to_json_line(back) == line);
  const Ball b = kfib::quantity_ball(*back.find("log2"));
  CHECK(b.overlaps(log(Ball::exact(2, 300))));
  CHECK(b.mid_q() == log(Ball::exact(2, 300)).mid_q());
  CHECK_THROWS_AS(kfib::from_json_line("{not json"), kfib::ConfigInvalid);
  CHECK_THROWS_AS(kfib::from_json_line("{\"stage\": 3}"), kfib::ConfigInvalid);
}

TEST_CASE("certificate log appends") {
  const auto path = std::filesystem::temp_directory_path() / "kfib_test_log.jsonl";
  std::filesystem::remove(path);
  {
    kfib::CertificateLog log(path.string());
    log.write(sample());
    log.write(sample());
  }
  auto all = kfib::read_certificates(path.string());
  CHECK(all.size() == 2);
  CHECK(all[1] == all[0]);
  std::filesystem::remove(path);
}

TEST_CASE("exit codes") {
  CHECK(kfib::exit_code(kfib::Verdict::Verified) == 0);
  CHECK(kfib::exit_code(kfib::Verdict::Failed) == 1);
  CHECK(kfib::exit_code(kfib::Verdict::Error) == 2);
  CHECK(kfib::verdict_from_string("verified") == kfib::Verdict::Verified);
}

TEST_CASE("config parsing") {
  auto c = kfib::Config::parse("# comment\n[search]\nk = \"3..5\"\nm = 7\n\n[global]\nbits = 512\n");
  CHECK(c.get_range("search", "k", {0, 0}).lo == 3);
  CHECK(c.get_range("search", "m", {0, 0}).hi == 7);
  CHECK(c.get_long("global", "bits", 0) == 512);
  c.apply_override("search.x=2..9");
  CHECK(c.get_range("search", "x", {0, 0}).hi == 9);
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(c.apply_override("search.x"), kfib::ConfigInvalid);
  CHECK_THROWS_AS(kfib::Config::parse("[nowhere]\nk = 1\n").validate(), kfib::ConfigInvalid);
  CHECK_THROWS_AS(kfib::Config::parse("[search]\nbogus = 1\n").validate(), kfib::ConfigInvalid);
  CHECK_THROWS_AS(kfib::Config::parse("[search\n"), kfib::ConfigInvalid);
  CHECK(kfib::parse_integer("2.64e35") == mpz_class("264000000000000000000000000000000000"));
  CHECK_THROWS_AS(kfib::parse_integer("2.5"), kfib::ConfigInvalid);
  CHECK_THROWS_AS(kfib::parse_range("5..3x"), kfib::ConfigInvalid);
  CHECK_NOTHROW(kfib::Config::desk().validate());
}

TEST_CASE("stages are deterministic") {
  auto cfg = kfib::Config::desk();
  for (const char* stage : {"kfib-identities", "heights", "bound-chain", "search"}) {
    auto a = kfib::run_stage(stage, cfg);
    auto b = kfib::run_stage(stage, cfg);
    CHECK_MESSAGE(a.verdict == kfib::Verdict::Verified, stage);
    CHECK(a.quantities == b.quantities);
  }
}

TEST_CASE("search certificate on the desk window is empty") {
  auto c = kfib::run_stage("search", kfib::Config::desk());
  CHECK(c.verdict == kfib::Verdict::Verified);
  for (const auto& q : c.quantities) CHECK(q.name.rfind("solution.", 0) != 0);
}

TEST_CASE("a corrupted constant breaks the pipeline at the chain") {
  auto cfg = kfib::Config::desk();
  cfg.apply_override("bound-chain.constants.small_x=1.0e32");
  std::vector<std::string> seen;
  auto certs = kfib::run_pipeline(cfg, [&](const kfib::Certificate& c) { seen.push_back(c.stage); });
  REQUIRE(!certs.empty());
  CHECK(certs.back().stage == "bound-chain");
  CHECK(certs.back().verdict == kfib::Verdict::Failed);
  CHECK(certs.back().error.find("small-x") != std::string::npos);
  CHECK(seen.size() == certs.size());
}

TEST_CASE("unknown stage and invalid stage config") {
  CHECK_THROWS_AS(kfib::run_stage("nope", kfib::Config::desk()), kfib::ConfigInvalid);
  auto cfg = kfib::Config::desk();
  cfg.set("final-min", "variant", "exp_3x");
  CHECK_THROWS_AS(kfib::run_stage("final-min", cfg), kfib::ConfigInvalid);
}

TEST_CASE("plan description") {
  const auto plan = kfib::pipeline_plan();
  REQUIRE(plan.size() == 9);
  CHECK(plan.front().stage == "kfib-identities");
  CHECK(plan[3].scenario == "small_m");
  CHECK(plan.back().stage == "final-min");
  const std::string text = kfib::describe_plan(kfib::Config::desk());
  for (const auto& s : plan) CHECK(text.find(s.stage) != std::string::npos);
}
