#pragma once

#include <Eigen/Dense>
#include <span>
#include <stdexcept>
#include <vector>

#include "pfadapt/models.hpp"
#include "pfadapt/rng.hpp"

namespace pfadapt {

// All raw likelihoods at a step were zero or non-finite.
class FilterDivergence : public std::runtime_error {
 public:
  explicit FilterDivergence(int t)
      : std::runtime_error("filter divergence: degenerate weights at step " +
                           std::to_string(t)),
        step(t) {}
  int step;
};

// Weighted or unweighted set of M particles at time t. Particles are the
// columns of `states` (dx x M).
struct ParticleSet {
  Eigen::MatrixXd states;
  Eigen::VectorXd weights;
  int t = 0;
  bool normalized = true;

  int size() const { return static_cast<int>(states.cols()); }
};

// Equal-weight mixture p_t^M(y) = (1/M) sum_m p(y | xbar_t^(m)). Holds
// references to the model and to the particle matrix it was built from;
// valid only while both outlive it.
class PredictiveMixture {
 public:
  PredictiveMixture(const Model& model, const ParticleSet& propagated)
      : model_(&model), states_(&propagated.states), t_(propagated.t) {}

  int size() const { return static_cast<int>(states_->cols()); }
  int t() const { return t_; }
  const Model& model() const { return *model_; }
  const Eigen::MatrixXd& states() const { return *states_; }

  // One draw: pick a component uniformly, then sample its observation.
  double sample(Rng& rng) const;

  // Mean of the mixture's observation means, (1/M) sum_m h(xbar^(m)).
  double predictive_obs_mean() const;

 private:
  const Model* model_;
  const Eigen::MatrixXd* states_;
  int t_;
};

// M0 prior draws with uniform weights at t = 0.
ParticleSet initialize(const Model& model, int M0, Rng& rng);

// One bootstrap step: propagate every particle through the transition kernel
// and weight by the likelihood of y_t (log-weights with max subtraction).
// The returned set holds the propagated particles xbar_t with normalized
// weights; build the predictive mixture from it BEFORE resampling.
ParticleSet propagate_and_weight(const Model& model, const ParticleSet& ps,
                                 double y_t, Rng& rng);

// Multinomial resampling of M_target particles with replacement from the
// weighted empirical distribution. Output size may differ from input size.
ParticleSet resample(const ParticleSet& ps, int M_target, Rng& rng);

Eigen::VectorXd posterior_mean(const ParticleSet& ps);

// K i.i.d. draws from the predictive mixture (fictitious observations).
std::vector<double> sample_fictitious(const PredictiveMixture& pm, int K,
                                      Rng& rng);

// Bootstrap filter with a piecewise-constant particle count: M1 particles
// for steps before switch_step (0-based), M2 from switch_step on. Returns
// the per-step predictive-observation means. Pass M2 = M1 (or switch_step
// outside the range) for a constant-M run.
std::vector<double> pf_predictive_means(const Model& model,
                                        std::span<const double> observations,
                                        int M1, int M2, int switch_step,
                                        Rng& rng);

}  // namespace pfadapt
