#include "kfib/certificate.hpp"

#include <chrono>
#include <ctime>

#include "json.hpp"

namespace kfib {

using json = nlohmann::ordered_json;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified:
      return "verified";
    case Verdict::Failed:
      return "failed";
    case Verdict::Error:
      break;
  }
  return "error";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "verified") return Verdict::Verified;
  if (s == "failed") return Verdict::Failed;
  if (s == "error") return Verdict::Error;
  throw ConfigInvalid("unknown verdict '" + s + "'");
}

int exit_code(Verdict v) { return v == Verdict::Verified ? 0 : v == Verdict::Failed ? 1 : 2; }

Quantity exact_quantity(std::string name, const mpz_class& v) {
  return {std::move(name), Quantity::Kind::Exact, v.get_str(), {}, 0};
}
Quantity exact_quantity(std::string name, const mpq_class& v) {
  return {std::move(name), Quantity::Kind::Exact, v.get_str(), {}, 0};
}
Quantity exact_quantity(std::string name, long v) {
  return {std::move(name), Quantity::Kind::Exact, std::to_string(v), {}, 0};
}
Quantity flag_quantity(std::string name, bool v) {
  return {std::move(name), Quantity::Kind::Exact, v ? "1" : "0", {}, 0};
}
Quantity ball_quantity(std::string name, const num::Ball& b) {
  return {std::move(name), Quantity::Kind::Ball, b.mid_decimal(), b.rad_decimal(), b.precision()};
}

num::Ball quantity_ball(const Quantity& q) {
  if (q.kind != Quantity::Kind::Ball) throw ConfigInvalid("quantity '" + q.name + "' is not a ball");
  return num::Ball::from_strings(q.value, q.radius, q.precision_bits);
}

const Quantity* Certificate::find(const std::string& name) const {
  for (const auto& q : quantities)
    if (q.name == name) return &q;
  return nullptr;
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_json_line(const Certificate& c) {
  json j;
  j["stage"] = c.stage;
  json params = json::object();
  for (const auto& [k, v] : c.parameters) params[k] = v;
  j["parameters"] = params;
  json qs = json::array();
  for (const auto& q : c.quantities) {
    json e;
    e["name"] = q.name;
    e["kind"] = q.kind == Quantity::Kind::Exact ? "exact" : "ball";
    e["value"] = q.value;
    if (q.kind == Quantity::Kind::Ball) {
      e["radius"] = q.radius;
      e["precision_bits"] = q.precision_bits;
    }
    qs.push_back(std::move(e));
  }
  j["quantities"] = qs;
  j["notes"] = c.notes;
  j["verdict"] = to_string(c.verdict);
  if (!c.error.empty()) j["error"] = c.error;
  j["timestamp"] = c.timestamp;
  j["tool_version"] = c.tool_version;
  return j.dump();
}

Certificate from_json_line(const std::string& line) {
  try {
    json j = json::parse(line);
    Certificate c;
    c.stage = j.at("stage").get<std::string>();
    for (const auto& [k, v] : j.at("parameters").items()) c.parameters.emplace_back(k, v.get<std::string>());
    for (const auto& e : j.at("quantities")) {
      Quantity q;
      q.name = e.at("name").get<std::string>();
      const std::string kind = e.at("kind").get<std::string>();
      if (kind != "exact" && kind != "ball") throw ConfigInvalid("unknown quantity kind '" + kind + "'");
      q.kind = kind == "exact" ? Quantity::Kind::Exact : Quantity::Kind::Ball;
      q.value = e.at("value").get<std::string>();
      if (q.kind == Quantity::Kind::Ball) {
        q.radius = e.at("radius").get<std::string>();
        q.precision_bits = e.at("precision_bits").get<long>();
      }
      c.quantities.push_back(std::move(q));
    }
    if (j.contains("notes")) c.notes = j.at("notes").get<std::vector<std::string>>();
    c.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    if (j.contains("error")) c.error = j.at("error").get<std::string>();
    c.timestamp = j.at("timestamp").get<std::string>();
    c.tool_version = j.at("tool_version").get<std::string>();
    return c;
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("malformed certificate: ") + e.what());
  }
}

CertificateLog::CertificateLog(const std::string& path) : out_(path, std::ios::app) {
  if (!out_) throw ConfigInvalid("cannot open certificate log '" + path + "'");
}

void CertificateLog::write(const Certificate& c) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!out_.is_open()) return;
  out_ << to_json_line(c) << '\n';
  out_.flush();
}

std::vector<Certificate> read_certificates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot read certificate log '" + path + "'");
  std::vector<Certificate> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(from_json_line(line));
  return out;
}

}  // namespace kfib
