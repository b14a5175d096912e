#include "pfadapt/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "pfadapt/bpf.hpp"
#include "pfadapt/diagnostics.hpp"
#include "pfadapt/special.hpp"

namespace pfadapt {

KalmanState kalman_init(const LgssParams& params) {
  KalmanState ks;
  ks.mean = params.prior_mean;
  ks.var = params.prior_std * params.prior_std;
  ks.pred_obs_mean = ks.mean;
  ks.pred_obs_var = ks.var + params.sigma_v * params.sigma_v;
  return ks;
}

KalmanState kalman_step(const LgssParams& params, const KalmanState& ks,
                        double y) {
  const double pred_mean = params.a * ks.mean;
  const double pred_var =
      params.a * params.a * ks.var + params.sigma_u * params.sigma_u;
  const double obs_var = pred_var + params.sigma_v * params.sigma_v;
  const double gain = pred_var / obs_var;

  KalmanState next;
  next.pred_obs_mean = pred_mean;
  next.pred_obs_var = obs_var;
  next.mean = pred_mean + gain * (y - pred_mean);
  next.var = (1.0 - gain) * pred_var;
  return next;
}

double exact_b(const KalmanState& ks, double y) {
  return normal_cdf(y, ks.pred_obs_mean, std::sqrt(ks.pred_obs_var));
}

std::vector<int> exact_sampler_sequence(int K, int steps, Rng& rng) {
  if (K < 1) throw std::invalid_argument("exact_sampler_sequence: K must be >= 1");
  if (steps < 1) throw std::invalid_argument("exact_sampler_sequence: steps must be >= 1");
  std::vector<int> seq(static_cast<std::size_t>(steps));
  std::vector<double> fict(static_cast<std::size_t>(K));
  for (auto& a : seq) {
    const double y = rng.normal();
    for (auto& f : fict) f = rng.normal();
    a = a_statistic(y, fict);
  }
  return seq;
}

std::vector<double> exact_sampler_pmf(int K, int draws, Rng& rng) {
  const auto seq = exact_sampler_sequence(K, draws, rng);
  return empirical_pmf(seq, K);
}

double pf_vs_kalman_mse(const LgssParams& params, int M, int T, int runs,
                        std::uint64_t seed) {
  if (T < 4) throw std::invalid_argument("pf_vs_kalman_mse: T must be >= 4");
  if (runs < 1) throw std::invalid_argument("pf_vs_kalman_mse: runs must be >= 1");
  const LgssModel model(params);
  const int first = 3 * T / 4;  // last quarter of the time steps
  double total = 0.0;
  long count = 0;
  for (int r = 0; r < runs; ++r) {
    Rng data_rng(mix_seed(seed, 0x64617461ULL, static_cast<std::uint64_t>(r)));
    const Trajectory traj = simulate_data(model, T, data_rng);
    Rng filt_rng(mix_seed(seed, 0x66696c74ULL, static_cast<std::uint64_t>(r)));
    const auto pf_pred =
        pf_predictive_means(model, traj.observations, M, M, T + 1, filt_rng);
    KalmanState ks = kalman_init(params);
    for (int t = 0; t < T; ++t) {
      ks = kalman_step(params, ks, traj.observations[static_cast<std::size_t>(t)]);
      if (t >= first) {
        const double d = pf_pred[static_cast<std::size_t>(t)] - ks.pred_obs_mean;
        total += d * d;
        ++count;
      }
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace pfadapt
