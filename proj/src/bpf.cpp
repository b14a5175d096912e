#include "pfadapt/bpf.hpp"

#include <cmath>
#include <limits>

namespace pfadapt {

double PredictiveMixture::sample(Rng& rng) const {
  const auto m = static_cast<Eigen::Index>(rng.uniform_int(states_->cols()));
  return model_->sample_observation(states_->col(m), t_, rng);
}

double PredictiveMixture::predictive_obs_mean() const {
  double sum = 0.0;
  for (Eigen::Index m = 0; m < states_->cols(); ++m) {
    sum += model_->observation_mean(states_->col(m), t_);
  }
  return sum / static_cast<double>(states_->cols());
}

ParticleSet initialize(const Model& model, int M0, Rng& rng) {
  if (M0 < 1) throw std::invalid_argument("initialize: M0 must be >= 1");
  ParticleSet ps;
  ps.states.resize(model.state_dim(), M0);
  for (int m = 0; m < M0; ++m) model.sample_prior(ps.states.col(m), rng);
  ps.weights = Eigen::VectorXd::Constant(M0, 1.0 / M0);
  ps.t = 0;
  ps.normalized = true;
  return ps;
}

ParticleSet propagate_and_weight(const Model& model, const ParticleSet& ps,
                                 double y_t, Rng& rng) {
  const int M = ps.size();
  const int t = ps.t + 1;
  ParticleSet out;
  out.states.resize(model.state_dim(), M);
  out.weights.resize(M);
  out.t = t;

  double max_logw = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < M; ++m) {
    model.sample_transition(out.states.col(m), ps.states.col(m), t, rng);
    const double lw = model.log_likelihood(y_t, out.states.col(m), t);
    out.weights(m) = lw;
    if (lw > max_logw) max_logw = lw;
  }
  if (!std::isfinite(max_logw)) throw FilterDivergence(t);

  double sum = 0.0;
  for (int m = 0; m < M; ++m) {
    out.weights(m) = std::exp(out.weights(m) - max_logw);
    sum += out.weights(m);
  }
  out.weights /= sum;
  out.normalized = true;
  return out;
}

ParticleSet resample(const ParticleSet& ps, int M_target, Rng& rng) {
  if (M_target < 1) throw std::invalid_argument("resample: M_target must be >= 1");
  const int M = ps.size();
  ParticleSet out;
  out.states.resize(ps.states.rows(), M_target);
  out.t = ps.t;

  // Multinomial draws via ordered uniforms (exponential spacings), one sweep
  // over the cumulative weights.
  double total_exp = 0.0;
  Eigen::VectorXd spacings(M_target + 1);
  for (int k = 0; k <= M_target; ++k) {
    const double e = -std::log(rng.uniform());
    spacings(k) = e;
    total_exp += e;
  }
  double cum_u = 0.0;
  double cum_w = ps.weights(0);
  int src = 0;
  for (int k = 0; k < M_target; ++k) {
    cum_u += spacings(k) / total_exp;
    while (cum_u > cum_w && src < M - 1) {
      ++src;
      cum_w += ps.weights(src);
    }
    out.states.col(k) = ps.states.col(src);
  }
  out.weights = Eigen::VectorXd::Constant(M_target, 1.0 / M_target);
  out.normalized = true;
  return out;
}

Eigen::VectorXd posterior_mean(const ParticleSet& ps) {
  return ps.states * ps.weights;
}

std::vector<double> sample_fictitious(const PredictiveMixture& pm, int K,
                                      Rng& rng) {
  if (K < 1) throw std::invalid_argument("sample_fictitious: K must be >= 1");
  std::vector<double> ys(static_cast<std::size_t>(K));
  for (auto& y : ys) y = pm.sample(rng);
  return ys;
}

std::vector<double> pf_predictive_means(const Model& model,
                                        std::span<const double> observations,
                                        int M1, int M2, int switch_step,
                                        Rng& rng) {
  if (M1 < 1 || M2 < 1) {
    throw std::invalid_argument("pf_predictive_means: particle counts must be >= 1");
  }
  std::vector<double> pred;
  pred.reserve(observations.size());
  ParticleSet ps = initialize(model, M1, rng);
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const ParticleSet weighted =
        propagate_and_weight(model, ps, observations[i], rng);
    pred.push_back(PredictiveMixture(model, weighted).predictive_obs_mean());
    const int M_next =
        (static_cast<int>(i) + 1 >= switch_step) ? M2 : M1;
    ps = resample(weighted, M_next, rng);
  }
  return pred;
}

}  // namespace pfadapt
