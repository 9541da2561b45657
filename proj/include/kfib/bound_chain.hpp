#pragma once

// Re-derivation of the explicit bounds for the two ranges of m.
//
// Each stage states one inequality and certifies it with ball arithmetic.
// The reference constants are only regression expectations: every one of
// them is recomputed and must come out strictly below its reference value.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kfib/ball.hpp"

namespace kfib {

enum class Scenario { SmallM, LargeM };

const char* to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

/* Reference constants by name, overridable for what-if runs. */
class ChainConstants {
 public:
  ChainConstants();
  /* Throws ConfigInvalid for an unknown name or a malformed decimal. */
  void set(const std::string& name, const std::string& decimal);
  const std::string& get(const std::string& name) const;
  const std::map<std::string, std::string>& all() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct ChainOptions {
  ChainConstants constants;
  // Smallest exponent in the large-m scenario; k >= 3 with k <= log x forces x >= 21.
  long x_min = 21;
  long bits = 256;
};

struct IntRange {
  long lo = 0;
  long hi = 0;
};

struct ChainStage {
  std::string name;
  std::string claim;  // "lhs < rhs" or "lhs <= rhs" in words
  num::Ball lhs;
  num::Ball rhs;
  bool strict = true;
  bool holds = false;
  std::string note;
};

struct BoundChainReport {
  Scenario scenario = Scenario::SmallM;
  IntRange m_range;
  IntRange k_range;
  std::optional<num::Ball> x_bound;
  std::optional<num::Ball> m_bound;
  std::optional<num::Ball> n_bound;
  long k_bound = 0;
  std::vector<ChainStage> stages;
  std::vector<std::string> notes;
  std::optional<std::string> broken_stage;
  std::string broken_detail;

  bool ok() const { return !broken_stage.has_value(); }
};

/* Runs every stage until the first failure, which is recorded in the report. */
BoundChainReport run_bound_chain(Scenario scenario, const ChainOptions& options = {});
/* Same, but throws ChainBroken on the first failing stage. */
BoundChainReport bound_chain(Scenario scenario, const ChainOptions& options = {});

}  // namespace kfib
