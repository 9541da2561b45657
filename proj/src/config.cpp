#include "kfib/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace kfib {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"global", {"bits", "log", "max_bits"}},
      {"kfib-identities", {"k", "n", "ratio_k", "ratio_m"}},
      {"root", {"k", "n", "bits"}},
      {"heights", {"k", "m"}},
      {"bound-chain", {"scenario", "x_min", "bits"}},
      {"bound-chain.constants", {}},  // keys checked against the chain constants
      {"dp-reduction", {"k", "m", "k_list", "m_list", "M", "index", "search_index", "index_cap", "bits"}},
      {"search", {"k", "m", "x", "moduli", "budget", "size_bracket", "controls"}},
      {"legendre", {"k", "terms", "bits"}},
      {"final-min", {"k", "x", "variant", "bits"}},
  };
  return s;
}

}  // namespace

IntRange parse_range(const std::string& text) {
  const std::string t = trim(unquote(trim(text)));
  auto to_long = [&](const std::string& s) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      throw ConfigInvalid("bad integer range '" + text + "'");
    }
    if (used != s.size()) throw ConfigInvalid("bad integer range '" + text + "'");
    return v;
  };
  const auto dots = t.find("..");
  IntRange r;
  if (dots == std::string::npos) {
    r.lo = r.hi = to_long(t);
  } else {
    r.lo = to_long(trim(t.substr(0, dots)));
    r.hi = to_long(trim(t.substr(dots + 2)));
  }
  if (r.lo > r.hi) throw ConfigInvalid("empty range '" + text + "'");
  return r;
}

mpz_class parse_integer(const std::string& text) {
  const std::string t = trim(unquote(trim(text)));
  std::string mant = t, expo = "0";
  const auto e = t.find_first_of("eE");
  if (e != std::string::npos) {
    mant = t.substr(0, e);
    expo = t.substr(e + 1);
  }
  long ex = 0;
  try {
    ex = std::stol(expo);
  } catch (const std::exception&) {
    throw ConfigInvalid("bad integer '" + text + "'");
  }
  std::string digits;
  for (char ch : mant) {
    if (ch == '.') continue;
    if (ch < '0' || ch > '9') throw ConfigInvalid("bad integer '" + text + "'");
    digits += ch;
  }
  const auto dot = mant.find('.');
  if (dot != std::string::npos) ex -= static_cast<long>(mant.size() - dot - 1);
  if (digits.empty()) throw ConfigInvalid("bad integer '" + text + "'");
  mpq_class q{mpz_class(digits)};
  mpz_class ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(ex < 0 ? -ex : ex));
  if (ex >= 0)
    q *= ten;
  else
    q /= ten;
  q.canonicalize();
  if (q.get_den() != 1) throw ConfigInvalid("'" + text + "' is not an integer");
  return q.get_num();
}

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line, current = "global";
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigInvalid("line " + std::to_string(lineno) + ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) throw ConfigInvalid("line " + std::to_string(lineno) + ": empty section name");
      c.data_[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigInvalid("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigInvalid("line " + std::to_string(lineno) + ": empty key");
    c.data_[current][key] = unquote(trim(line.substr(eq + 1)));
  }
  c.validate();
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Config Config::desk() {
  return parse(R"(
[global]
bits = 256

[kfib-identities]
k = 2..100
ratio_k = 3..30
ratio_m = 3..300

[root]
k = 2..30
n = 1..300

[heights]
k = 3
m = 3

[bound-chain]
x_min = 21

[dp-reduction]
k = 3..5
m = 3..30
M = 2.64e35
index = 700

[search]
k = 3..5
m = 3..30
x = 2..30
moduli = default

[legendre]
k = 3..242
terms = 231

[final-min]
k = 3..5
x = 20..150
variant = both
)");
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigInvalid("override '" + assignment + "' needs section.key=value");
  const std::string lhs = trim(assignment.substr(0, eq));
  const auto dot = lhs.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size())
    throw ConfigInvalid("override '" + assignment + "' needs section.key=value");
  set(lhs.substr(0, dot), lhs.substr(dot + 1), unquote(trim(assignment.substr(eq + 1))));
  validate();
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  data_[section][key] = value;
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  return s != data_.end() && s->second.count(key) != 0;
}

std::string Config::get(const std::string& section, const std::string& key, const std::string& fallback) const {
  auto s = data_.find(section);
  if (s == data_.end()) return fallback;
  auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

long Config::get_long(const std::string& section, const std::string& key, long fallback) const {
  if (!has(section, key)) return fallback;
  mpz_class v = parse_integer(get(section, key, ""));
  if (!v.fits_slong_p()) throw ConfigInvalid(section + "." + key + " is out of range");
  return v.get_si();
}

IntRange Config::get_range(const std::string& section, const std::string& key, IntRange fallback) const {
  return has(section, key) ? parse_range(get(section, key, "")) : fallback;
}

mpz_class Config::get_integer(const std::string& section, const std::string& key, const std::string& fallback) const {
  return parse_integer(get(section, key, fallback));
}

std::vector<long> Config::get_list(const std::string& section, const std::string& key,
                                   const std::vector<long>& fallback) const {
  if (!has(section, key)) return fallback;
  std::vector<long> out;
  std::stringstream ss(get(section, key, ""));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    IntRange r = parse_range(item);
    for (long v = r.lo; v <= r.hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ConfigInvalid(section + "." + key + " is an empty list");
  return out;
}

const std::map<std::string, std::string>& Config::section(const std::string& name) const {
  static const std::map<std::string, std::string> empty;
  auto s = data_.find(name);
  return s == data_.end() ? empty : s->second;
}

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : data_) out.push_back(name);
  return out;
}

void Config::validate() const {
  for (const auto& [name, keys] : data_) {
    auto s = schema().find(name);
    if (s == schema().end()) throw ConfigInvalid("unknown config section [" + name + "]");
    for (const auto& [key, value] : keys) {
      if (name == "bound-chain.constants") {
        ChainConstants probe;
        probe.set(key, value);  // throws ConfigInvalid for unknown names and bad decimals
        continue;
      }
      if (s->second.count(key) == 0) throw ConfigInvalid("unknown key '" + key + "' in [" + name + "]");
    }
  }
}

}  // namespace kfib
