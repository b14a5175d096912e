#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pfadapt/diagnostics.hpp"

namespace pfadapt {

enum class AssessMethod { UniformityA, CorrelationA, UniformityB, Fixed };

struct AdaptPolicy {
  int K = 7;
  int W = 50;
  double p_low = 0.2;
  double p_high = 0.6;
  // Correlation-policy thresholds (tunables, not calibrated values).
  double r_high = 0.2;
  double r_low = 0.05;
  int M_min = 16;
  int M_max = 1 << 16;
  double scale = 2.0;
  AssessMethod method = AssessMethod::UniformityA;
  // Per-step statistics recorded in the trace. The A statistic is always
  // collected when record_a is set, even under the fixed policy.
  bool record_a = true;
  bool record_b = true;

  void validate() const;
};

enum class AdaptAction { Increase, Keep, Decrease };

struct AdaptDecision {
  AdaptAction action = AdaptAction::Keep;
  double evidence = 0.0;  // p-value or |r| that produced the action
};

struct StepRecord {
  int t = 0;  // 0-based observation index
  int M = 0;
  Eigen::VectorXd mean;       // posterior mean estimate
  double pred_obs_mean = 0.0; // mean of the predictive observation mixture
  int a = -1;                 // A statistic, -1 when not recorded
  double b = -1.0;            // B statistic, -1 when not recorded
};

struct BlockRecord {
  WindowRecord window;
  AdaptDecision decision;
  int M_next = 0;
};

struct RunTrace {
  std::vector<StepRecord> steps;
  std::vector<BlockRecord> blocks;
  std::uint64_t seed = 0;
  bool diverged = false;
  int diverged_at = -1;
};

// Maps the block's test evidence through the policy thresholds.
AdaptDecision assess_block(const WindowRecord& rec, const AdaptPolicy& policy);

// Geometric update: increase -> round(M * scale), decrease -> round(M / scale),
// clamped to [M_min, M_max].
int update_M(int M_n, const AdaptDecision& d, const AdaptPolicy& policy);

// Full block-adaptive bootstrap filter over the observation sequence.
// On filter divergence the trace up to the failing step is returned with
// the diverged flag set.
RunTrace run_adaptive_filter(const Model& model,
                             std::span<const double> observations,
                             const AdaptPolicy& policy, int M0,
                             std::uint64_t seed);

}  // namespace pfadapt
