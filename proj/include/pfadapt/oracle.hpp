#pragma once

#include <cstdint>
#include <vector>

#include "pfadapt/models.hpp"
#include "pfadapt/rng.hpp"

namespace pfadapt {

// Exact Kalman filter state for the linear-Gaussian model. pred_obs_* are
// the one-step-ahead predictive observation moments of the step that
// produced this state.
struct KalmanState {
  double mean = 0.0;
  double var = 0.0;
  double pred_obs_mean = 0.0;
  double pred_obs_var = 0.0;
};

KalmanState kalman_init(const LgssParams& params);

// One predict-update recursion: predictive observation N(a*mean,
// a^2*var + sigma_u^2 + sigma_v^2), then the posterior given y.
KalmanState kalman_step(const LgssParams& params, const KalmanState& ks,
                        double y);

// Exact PIT value B_t = F_t(y) under the Kalman predictive distribution.
double exact_b(const KalmanState& ks, double y);

// Distribution of the A statistic when the observation and the fictitious
// values are drawn from the same continuous distribution (standard normal):
// histogram over {0..K} from repeated draws. Reference for the uniform pmf.
std::vector<double> exact_sampler_pmf(int K, int draws, Rng& rng);

// A-statistic sequence from the exact sampler, one value per step.
std::vector<int> exact_sampler_sequence(int K, int steps, Rng& rng);

// Mean over runs and over the last T/4 steps of the squared difference
// between the bootstrap filter's predictive-observation mean and the exact
// Kalman predictive-observation mean.
double pf_vs_kalman_mse(const LgssParams& params, int M, int T, int runs,
                        std::uint64_t seed);

}  // namespace pfadapt
