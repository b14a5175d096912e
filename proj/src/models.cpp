#include "pfadapt/models.hpp"

#include <cmath>
#include <stdexcept>

#include "pfadapt/special.hpp"

namespace pfadapt {

double Model::likelihood(double y, const StateCRef& x, int t) const {
  return normal_pdf(y, observation_mean(x, t), observation_std());
}

double Model::log_likelihood(double y, const StateCRef& x, int t) const {
  const double s = observation_std();
  const double z = (y - observation_mean(x, t)) / s;
  return -0.5 * z * z - std::log(s) - 0.91893853320467274178;  // log sqrt(2 pi)
}

double Model::likelihood_cdf(double y, const StateCRef& x, int t) const {
  if (!has_likelihood_cdf()) {
    throw std::runtime_error("model '" + name() +
                             "' has no closed-form observation CDF");
  }
  return normal_cdf(y, observation_mean(x, t), observation_std());
}

double Model::sample_observation(const StateCRef& x, int t, Rng& rng) const {
  return observation_mean(x, t) + observation_std() * rng.normal();
}

LgssModel::LgssModel(const LgssParams& p) : params_(p) {
  if (p.sigma_u <= 0.0 || p.sigma_v <= 0.0 || p.prior_std <= 0.0) {
    throw std::invalid_argument("LgssModel: noise and prior stds must be positive");
  }
}

void LgssModel::sample_prior(StateRef x, Rng& rng) const {
  x(0) = params_.prior_mean + params_.prior_std * rng.normal();
}

void LgssModel::sample_transition(StateRef out, const StateCRef& prev, int,
                                  Rng& rng) const {
  out(0) = params_.a * prev(0) + params_.sigma_u * rng.normal();
}

void LgssModel::drift(StateRef out, const StateCRef& prev, int) const {
  out(0) = params_.a * prev(0);
}

double LgssModel::observation_mean(const StateCRef& x, int) const {
  return x(0);
}

GrowthModel::GrowthModel(const GrowthParams& p) : params_(p) {
  if (p.sigma_u <= 0.0 || p.sigma_v <= 0.0) {
    throw std::invalid_argument("GrowthModel: noise stds must be positive");
  }
}

void GrowthModel::sample_prior(StateRef x, Rng& rng) const {
  x(0) = rng.normal();
}

void GrowthModel::sample_transition(StateRef out, const StateCRef& prev, int t,
                                    Rng& rng) const {
  drift(out, prev, t);
  out(0) += params_.sigma_u * rng.normal();
}

void GrowthModel::drift(StateRef out, const StateCRef& prev, int t) const {
  const double x = prev(0);
  out(0) = 0.5 * x + 25.0 * x / (1.0 + x * x) + 8.0 * std::cos(params_.phi * t);
}

double GrowthModel::observation_mean(const StateCRef& x, int) const {
  return x(0) * x(0) / 20.0;
}

Lorenz63Model::Lorenz63Model(const Lorenz63Params& p)
    : params_(p), obs_std_(std::sqrt(p.sigma2_obs)) {
  if (p.delta <= 0.0) throw std::invalid_argument("Lorenz63Model: delta must be positive");
  if (p.sigma2_obs <= 0.0) throw std::invalid_argument("Lorenz63Model: sigma2_obs must be positive");
  if (p.sigma2_state < 0.0) throw std::invalid_argument("Lorenz63Model: sigma2_state must be nonnegative");
  const double ratio = p.t_obs / p.delta;
  substeps_ = static_cast<int>(std::lround(ratio));
  if (substeps_ < 1 || std::fabs(ratio - substeps_) > 1e-9 * ratio) {
    throw std::invalid_argument("Lorenz63Model: t_obs must be a positive multiple of delta");
  }
}

void Lorenz63Model::sample_prior(StateRef x, Rng& rng) const {
  // Point on the attractor plus unit Gaussian jitter.
  x(0) = -5.91652 + rng.normal();
  x(1) = -5.52332 + rng.normal();
  x(2) = 24.5723 + rng.normal();
}

void Lorenz63Model::euler_step(StateRef x, double noise_std, Rng* rng) const {
  const double dt = params_.delta;
  const double dx = params_.sigma * (x(1) - x(0));
  const double dy = x(0) * (params_.rho - x(2)) - x(1);
  const double dz = x(0) * x(1) - params_.beta * x(2);
  x(0) += dt * dx;
  x(1) += dt * dy;
  x(2) += dt * dz;
  if (rng != nullptr && noise_std > 0.0) {
    x(0) += noise_std * rng->normal();
    x(1) += noise_std * rng->normal();
    x(2) += noise_std * rng->normal();
  }
}

void Lorenz63Model::sample_transition(StateRef out, const StateCRef& prev, int,
                                      Rng& rng) const {
  out = prev;
  const double noise_std = std::sqrt(params_.sigma2_state * params_.delta);
  for (int i = 0; i < substeps_; ++i) euler_step(out, noise_std, &rng);
}

void Lorenz63Model::drift(StateRef out, const StateCRef& prev, int) const {
  out = prev;
  for (int i = 0; i < substeps_; ++i) euler_step(out, 0.0, nullptr);
}

double Lorenz63Model::observation_mean(const StateCRef& x, int) const {
  return x(0);
}

Trajectory simulate_data(const Model& model, int T, Rng& rng) {
  if (T < 1) throw std::invalid_argument("simulate_data: T must be >= 1");
  Trajectory traj;
  traj.states.resize(model.state_dim(), T);
  traj.observations.resize(static_cast<std::size_t>(T));
  Eigen::VectorXd x(model.state_dim());
  model.sample_prior(x, rng);
  for (int t = 1; t <= T; ++t) {
    Eigen::VectorXd next(model.state_dim());
    model.sample_transition(next, x, t, rng);
    x = next;
    traj.states.col(t - 1) = x;
    traj.observations[static_cast<std::size_t>(t - 1)] =
        model.sample_observation(x, t, rng);
  }
  return traj;
}

}  // namespace pfadapt
