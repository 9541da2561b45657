#pragma once

// Small TOML-style configuration: [section] headers, key = value lines,
// '#' comments, optional double quotes around values.

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "kfib/bound_chain.hpp"

namespace kfib {

class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);
  /* Built-in desk-scale preset. */
  static Config desk();

  /* "section.key=value"; throws ConfigInvalid on a malformed override. */
  void apply_override(const std::string& assignment);
  void set(const std::string& section, const std::string& key, const std::string& value);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key, const std::string& fallback) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  IntRange get_range(const std::string& section, const std::string& key, IntRange fallback) const;
  mpz_class get_integer(const std::string& section, const std::string& key, const std::string& fallback) const;
  std::vector<long> get_list(const std::string& section, const std::string& key, const std::vector<long>& fallback) const;

  const std::map<std::string, std::string>& section(const std::string& name) const;
  std::vector<std::string> sections() const;

  /* Rejects unknown sections and keys. */
  void validate() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

/* "a..b" or a single integer. */
IntRange parse_range(const std::string& text);
/* Non-negative integer given as digits or a decimal such as 2.64e35 (must be integral). */
mpz_class parse_integer(const std::string& text);

}  // namespace kfib
