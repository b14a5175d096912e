#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pfadapt/rng.hpp"

namespace pfadapt {

using StateRef = Eigen::Ref<Eigen::VectorXd>;
using StateCRef = Eigen::Ref<const Eigen::VectorXd>;

// Discrete-time Markov state-space model with scalar observations.
// All bundled models have additive Gaussian observation noise
//   y_t = h(x_t) + v_t,  v_t ~ N(0, observation_std^2),
// so likelihood, likelihood CDF and observation sampling are derived from
// observation_mean() and observation_std(). Models without a closed-form
// observation CDF may override has_likelihood_cdf() to opt out.
class Model {
 public:
  virtual ~Model() = default;

  virtual int state_dim() const = 0;
  virtual std::string name() const = 0;

  virtual void sample_prior(StateRef x, Rng& rng) const = 0;
  virtual void sample_transition(StateRef out, const StateCRef& prev, int t,
                                 Rng& rng) const = 0;
  // Noise-free transition (test hook for deterministic drift checks).
  virtual void drift(StateRef out, const StateCRef& prev, int t) const = 0;

  virtual double observation_mean(const StateCRef& x, int t) const = 0;
  virtual double observation_std() const = 0;
  virtual bool has_likelihood_cdf() const { return true; }

  double likelihood(double y, const StateCRef& x, int t) const;
  double log_likelihood(double y, const StateCRef& x, int t) const;
  // Throws std::runtime_error when has_likelihood_cdf() is false.
  double likelihood_cdf(double y, const StateCRef& x, int t) const;
  double sample_observation(const StateCRef& x, int t, Rng& rng) const;
};

struct LgssParams {
  double a = 0.9;
  double sigma_u = 0.7071067811865476;  // sqrt(0.5)
  double sigma_v = 1.0;
  double prior_mean = 0.0;
  double prior_std = 1.0;
};

// Linear-Gaussian model: x_t = a x_{t-1} + u_t, y_t = x_t + v_t.
class LgssModel final : public Model {
 public:
  explicit LgssModel(const LgssParams& p);

  int state_dim() const override { return 1; }
  std::string name() const override { return "lgss"; }
  void sample_prior(StateRef x, Rng& rng) const override;
  void sample_transition(StateRef out, const StateCRef& prev, int t,
                         Rng& rng) const override;
  void drift(StateRef out, const StateCRef& prev, int t) const override;
  double observation_mean(const StateCRef& x, int t) const override;
  double observation_std() const override { return params_.sigma_v; }

  const LgssParams& params() const { return params_; }

 private:
  LgssParams params_;
};

struct GrowthParams {
  double phi = 0.4;
  double sigma_u = 1.0;
  double sigma_v = 0.5;
};

// Stochastic growth model:
//   x_t = x_{t-1}/2 + 25 x_{t-1} / (1 + x_{t-1}^2) + 8 cos(phi t) + u_t
//   y_t = x_t^2 / 20 + v_t
// Prior on x_0 is standard normal.
class GrowthModel final : public Model {
 public:
  explicit GrowthModel(const GrowthParams& p);

  int state_dim() const override { return 1; }
  std::string name() const override { return "growth"; }
  void sample_prior(StateRef x, Rng& rng) const override;
  void sample_transition(StateRef out, const StateCRef& prev, int t,
                         Rng& rng) const override;
  void drift(StateRef out, const StateCRef& prev, int t) const override;
  double observation_mean(const StateCRef& x, int t) const override;
  double observation_std() const override { return params_.sigma_v; }

  const GrowthParams& params() const { return params_; }

  static GrowthParams model1() { return GrowthParams{0.4, 1.0, 0.5}; }
  static GrowthParams model2() { return GrowthParams{0.4, 2.0, 0.1}; }

 private:
  GrowthParams params_;
};

struct Lorenz63Params {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  double delta = 1e-3;        // Euler-Maruyama step
  double t_obs = 200e-3;      // observation period, multiple of delta
  double sigma2_obs = 0.5;    // observation noise variance
  double sigma2_state = 1.0;  // diffusion intensity
};

// Lorenz 63 system discretized with Euler-Maruyama; one filter step covers
// t_obs/delta integration substeps. Observed coordinate is x1.
class Lorenz63Model final : public Model {
 public:
  explicit Lorenz63Model(const Lorenz63Params& p);

  int state_dim() const override { return 3; }
  std::string name() const override { return "lorenz63"; }
  void sample_prior(StateRef x, Rng& rng) const override;
  void sample_transition(StateRef out, const StateCRef& prev, int t,
                         Rng& rng) const override;
  void drift(StateRef out, const StateCRef& prev, int t) const override;
  double observation_mean(const StateCRef& x, int t) const override;
  double observation_std() const override { return obs_std_; }

  const Lorenz63Params& params() const { return params_; }
  int substeps() const { return substeps_; }

 private:
  void euler_step(StateRef x, double noise_std, Rng* rng) const;

  Lorenz63Params params_;
  double obs_std_;
  int substeps_;
};

// One simulated trajectory: hidden states x_1..x_T (columns) and scalar
// observations y_1..y_T, starting from a prior draw x_0.
struct Trajectory {
  Eigen::MatrixXd states;  // dx x T
  std::vector<double> observations;
};

Trajectory simulate_data(const Model& model, int T, Rng& rng);

}  // namespace pfadapt
