#include "pfadapt/adapt.hpp"

#include <cmath>
#include <stdexcept>

namespace pfadapt {

void AdaptPolicy::validate() const {
  if (K < 1) throw std::invalid_argument("AdaptPolicy: K must be >= 1");
  if (W < 1) throw std::invalid_argument("AdaptPolicy: W must be >= 1");
  if (M_min < 1 || M_min > M_max) {
    throw std::invalid_argument("AdaptPolicy: need 1 <= M_min <= M_max");
  }
  if (!(0.0 < p_low && p_low < p_high && p_high < 1.0)) {
    throw std::invalid_argument("AdaptPolicy: need 0 < p_low < p_high < 1");
  }
  if (scale <= 1.0) throw std::invalid_argument("AdaptPolicy: scale must be > 1");
}

namespace {

AdaptDecision decide_from_pvalue(double p, const AdaptPolicy& policy) {
  if (p < policy.p_low) return {AdaptAction::Increase, p};
  if (p > policy.p_high) return {AdaptAction::Decrease, p};
  return {AdaptAction::Keep, p};
}

}  // namespace

AdaptDecision assess_block(const WindowRecord& rec, const AdaptPolicy& policy) {
  switch (policy.method) {
    case AssessMethod::UniformityA:
      return decide_from_pvalue(chi2_uniformity_pvalue(rec.a_values, policy.K),
                                policy);
    case AssessMethod::CorrelationA: {
      std::vector<double> vals(rec.a_values.begin(), rec.a_values.end());
      const auto r = lag_correlation(vals, 1);
      if (!r.has_value()) {
        // Constant window: no correlation evidence, keep M.
        return {AdaptAction::Keep, 0.0};
      }
      const double ar = std::fabs(*r);
      if (ar > policy.r_high) return {AdaptAction::Increase, ar};
      if (ar < policy.r_low) return {AdaptAction::Decrease, ar};
      return {AdaptAction::Keep, ar};
    }
    case AssessMethod::UniformityB: {
      const int bins = policy.K + 1;
      std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
      for (double b : rec.b_values) {
        int idx = static_cast<int>(b * bins);
        if (idx >= bins) idx = bins - 1;
        if (idx < 0) idx = 0;
        counts[static_cast<std::size_t>(idx)] += 1.0;
      }
      return decide_from_pvalue(chi2_counts_pvalue(counts), policy);
    }
    case AssessMethod::Fixed:
      return {AdaptAction::Keep, 0.0};
  }
  throw std::logic_error("assess_block: unknown method");
}

int update_M(int M_n, const AdaptDecision& d, const AdaptPolicy& policy) {
  long long next = M_n;
  switch (d.action) {
    case AdaptAction::Increase:
      next = std::llround(M_n * policy.scale);
      break;
    case AdaptAction::Decrease:
      next = std::llround(M_n / policy.scale);
      break;
    case AdaptAction::Keep:
      break;
  }
  if (next < policy.M_min) next = policy.M_min;
  if (next > policy.M_max) next = policy.M_max;
  return static_cast<int>(next);
}

RunTrace run_adaptive_filter(const Model& model,
                             std::span<const double> observations,
                             const AdaptPolicy& policy, int M0,
                             std::uint64_t seed) {
  policy.validate();
  if (observations.empty()) {
    throw std::invalid_argument("run_adaptive_filter: no observations");
  }
  if (M0 < 1) throw std::invalid_argument("run_adaptive_filter: M0 must be >= 1");

  const bool use_a =
      policy.record_a || policy.method == AssessMethod::UniformityA ||
      policy.method == AssessMethod::CorrelationA;
  const bool use_b =
      (policy.record_b || policy.method == AssessMethod::UniformityB) &&
      model.has_likelihood_cdf();

  RunTrace trace;
  trace.seed = seed;
  trace.steps.reserve(observations.size());

  Rng rng(seed);
  ParticleSet ps = initialize(model, M0, rng);
  int M_cur = M0;
  int block = 0;
  int in_block = 0;
  WindowRecord rec;
  rec.n = 0;
  rec.M = M_cur;

  for (std::size_t i = 0; i < observations.size(); ++i) {
    const double y = observations[i];
    ParticleSet weighted;
    try {
      weighted = propagate_and_weight(model, ps, y, rng);
    } catch (const FilterDivergence&) {
      trace.diverged = true;
      trace.diverged_at = static_cast<int>(i);
      return trace;
    }
    const PredictiveMixture mixture(model, weighted);

    StepRecord step;
    step.t = static_cast<int>(i);
    step.M = M_cur;
    step.mean = posterior_mean(weighted);
    step.pred_obs_mean = mixture.predictive_obs_mean();
    if (use_a) {
      const auto fict = sample_fictitious(mixture, policy.K, rng);
      step.a = a_statistic(y, fict);
      rec.a_values.push_back(step.a);
    }
    if (use_b) {
      step.b = b_statistic(mixture, y);
      rec.b_values.push_back(step.b);
    }
    trace.steps.push_back(std::move(step));
    ++in_block;

    if (in_block == policy.W) {
      rec.W = in_block;
      rec.M = M_cur;
      const AdaptDecision d = assess_block(rec, policy);
      const int M_next = update_M(M_cur, d, policy);
      if (policy.method == AssessMethod::UniformityA ||
          policy.method == AssessMethod::UniformityB) {
        rec.p_value = d.evidence;
      } else if (policy.method == AssessMethod::CorrelationA) {
        rec.corr = d.evidence;
      }
      trace.blocks.push_back({std::move(rec), d, M_next});
      ps = resample(weighted, M_next, rng);
      M_cur = M_next;
      in_block = 0;
      rec = WindowRecord{};
      rec.n = ++block;
      rec.M = M_cur;
    } else {
      ps = resample(weighted, M_cur, rng);
    }
  }
  return trace;
}

}  // namespace pfadapt
