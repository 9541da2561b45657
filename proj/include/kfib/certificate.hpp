#pragma once

// Stage certificates, serialised as one JSON document per line.
//
// Numbers that matter are strings: integers and rationals exactly, balls as
// a midpoint/radius pair that rebuilds the same ball at the recorded precision.

#include <gmpxx.h>

#include <fstream>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "kfib/ball.hpp"

namespace kfib {

inline constexpr const char* kToolVersion = "kfib 0.1.0";

enum class Verdict { Verified, Failed, Error };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);
/* 0 verified, 1 failed, 2 error. */
int exit_code(Verdict v);

struct Quantity {
  enum class Kind { Exact, Ball };
  std::string name;
  Kind kind = Kind::Exact;
  std::string value;   // integer, p/q, or ball midpoint
  std::string radius;  // ball only
  long precision_bits = 0;

  bool operator==(const Quantity&) const = default;
};

Quantity exact_quantity(std::string name, const mpz_class& v);
Quantity exact_quantity(std::string name, const mpq_class& v);
Quantity exact_quantity(std::string name, long v);
Quantity flag_quantity(std::string name, bool v);
Quantity ball_quantity(std::string name, const num::Ball& b);
/* Inverse of ball_quantity. */
num::Ball quantity_ball(const Quantity& q);

struct Certificate {
  std::string stage;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<Quantity> quantities;
  std::vector<std::string> notes;
  Verdict verdict = Verdict::Error;
  std::string error;
  std::string timestamp;
  std::string tool_version = kToolVersion;

  void param(std::string key, std::string value) { parameters.emplace_back(std::move(key), std::move(value)); }
  void add(Quantity q) { quantities.push_back(std::move(q)); }
  const Quantity* find(const std::string& name) const;

  bool operator==(const Certificate&) const = default;
};

std::string utc_timestamp();
std::string to_json_line(const Certificate& c);
/* Throws ConfigInvalid on malformed input. */
Certificate from_json_line(const std::string& line);

/* Append-only sink; safe to share between threads. */
class CertificateLog {
 public:
  CertificateLog() = default;
  explicit CertificateLog(const std::string& path);
  bool is_open() const { return out_.is_open(); }
  void write(const Certificate& c);

 private:
  std::ofstream out_;
  std::mutex mu_;
};

std::vector<Certificate> read_certificates(const std::string& path);

}  // namespace kfib
