#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kfib/bound_chain.hpp"
#include "kfib/certificate.hpp"
#include "kfib/config.hpp"

namespace kfib {

/* Bounds certified by earlier stages of one pipeline run. */
struct PipelineState {
  std::optional<BoundChainReport> small_chain;
  std::optional<BoundChainReport> large_chain;
};

const std::vector<std::string>& stage_names();

/* Runs one stage. ConfigInvalid escapes; every other failure is recorded
 * in the returned certificate. */
Certificate run_stage(const std::string& stage, const Config& config, PipelineState* state = nullptr);

struct PlanStep {
  std::string stage;
  std::string scenario;  // bound-chain only
};

std::vector<PlanStep> pipeline_plan();
/* Human-readable plan with the effective parameters of each step. */
std::string describe_plan(const Config& config);

/* Runs the plan in order and stops after the first certificate that is not
 * verified.  on_certificate sees each certificate as soon as it exists. */
std::vector<Certificate> run_pipeline(const Config& config,
                                      const std::function<void(const Certificate&)>& on_certificate = {});

}  // namespace kfib
