#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pfadapt/adapt.hpp"
#include "pfadapt/harness.hpp"
#include "pfadapt/oracle.hpp"
#include "pfadapt/special.hpp"

namespace py = pybind11;
using namespace pfadapt;

namespace {

AdaptPolicy make_policy(int K, int W, double p_low, double p_high, int M_min,
                        int M_max, double scale, const std::string& method,
                        bool record_b) {
  AdaptPolicy p;
  p.K = K;
  p.W = W;
  p.p_low = p_low;
  p.p_high = p_high;
  p.M_min = M_min;
  p.M_max = M_max;
  p.scale = scale;
  p.method = harness::parse_method(method);
  p.record_b = record_b;
  return p;
}

py::dict trace_to_dict(const RunTrace& trace) {
  const auto n = trace.steps.size();
  std::vector<int> t(n), M(n), a(n);
  std::vector<double> b(n), pred(n);
  std::vector<Eigen::VectorXd> mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = trace.steps[i];
    t[i] = s.t;
    M[i] = s.M;
    a[i] = s.a;
    b[i] = s.b;
    pred[i] = s.pred_obs_mean;
    mean[i] = s.mean;
  }
  py::list blocks;
  for (const auto& blk : trace.blocks) {
    py::dict d;
    d["n"] = blk.window.n;
    d["W"] = blk.window.W;
    d["M"] = blk.window.M;
    d["a_values"] = blk.window.a_values;
    d["M_next"] = blk.M_next;
    d["action"] = blk.decision.action == AdaptAction::Increase   ? "increase"
                  : blk.decision.action == AdaptAction::Decrease ? "decrease"
                                                                 : "keep";
    d["evidence"] = blk.decision.evidence;
    blocks.append(d);
  }
  py::dict out;
  out["t"] = t;
  out["M"] = M;
  out["a"] = a;
  out["b"] = b;
  out["pred_obs_mean"] = pred;
  out["posterior_mean"] = mean;
  out["blocks"] = blocks;
  out["seed"] = trace.seed;
  out["diverged"] = trace.diverged;
  return out;
}

}  // namespace

PYBIND11_MODULE(pfadapt, m) {
  m.doc() = "Bootstrap particle filter with block-adaptive number of particles";
  m.attr("__version__") = harness::kVersion;

  py::class_<Model, std::shared_ptr<Model>>(m, "Model")
      .def_property_readonly("state_dim", &Model::state_dim)
      .def_property_readonly("name", &Model::name);

  m.def(
      "lgss_model",
      [](double a, double sigma_u, double sigma_v, double prior_mean,
         double prior_std) -> std::shared_ptr<Model> {
        return std::make_shared<LgssModel>(
            LgssParams{a, sigma_u, sigma_v, prior_mean, prior_std});
      },
      py::arg("a") = 0.9, py::arg("sigma_u") = 0.7071067811865476,
      py::arg("sigma_v") = 1.0, py::arg("prior_mean") = 0.0,
      py::arg("prior_std") = 1.0);

  m.def(
      "growth_model",
      [](double phi, double sigma_u, double sigma_v) -> std::shared_ptr<Model> {
        return std::make_shared<GrowthModel>(GrowthParams{phi, sigma_u, sigma_v});
      },
      py::arg("phi") = 0.4, py::arg("sigma_u") = 1.0, py::arg("sigma_v") = 0.5);

  m.def(
      "lorenz63_model",
      [](double sigma, double rho, double beta, double delta, double t_obs,
         double sigma2_obs, double sigma2_state) -> std::shared_ptr<Model> {
        return std::make_shared<Lorenz63Model>(Lorenz63Params{
            sigma, rho, beta, delta, t_obs, sigma2_obs, sigma2_state});
      },
      py::arg("sigma") = 10.0, py::arg("rho") = 28.0, py::arg("beta") = 8.0 / 3.0,
      py::arg("delta") = 1e-3, py::arg("t_obs") = 200e-3,
      py::arg("sigma2_obs") = 0.5, py::arg("sigma2_state") = 1.0);

  m.def(
      "simulate_data",
      [](const Model& model, int T, std::uint64_t seed) {
        Rng rng(seed);
        const Trajectory traj = simulate_data(model, T, rng);
        return py::make_tuple(traj.states, traj.observations);
      },
      py::arg("model"), py::arg("T"), py::arg("seed"));

  m.def(
      "run_adaptive_filter",
      [](const Model& model, const std::vector<double>& observations, int M0,
         std::uint64_t seed, int K, int W, double p_low, double p_high,
         int M_min, int M_max, double scale, const std::string& method,
         bool record_b) {
        const AdaptPolicy policy = make_policy(K, W, p_low, p_high, M_min,
                                               M_max, scale, method, record_b);
        return trace_to_dict(
            run_adaptive_filter(model, observations, policy, M0, seed));
      },
      py::arg("model"), py::arg("observations"), py::arg("M0"), py::arg("seed"),
      py::arg("K") = 7, py::arg("W") = 50, py::arg("p_low") = 0.2,
      py::arg("p_high") = 0.6, py::arg("M_min") = 16,
      py::arg("M_max") = 1 << 16, py::arg("scale") = 2.0,
      py::arg("method") = "uniformity-a", py::arg("record_b") = true);

  m.def(
      "pf_predictive_means",
      [](const Model& model, const std::vector<double>& observations, int M1,
         int M2, int switch_step, std::uint64_t seed) {
        Rng rng(seed);
        return pf_predictive_means(model, observations, M1, M2, switch_step,
                                   rng);
      },
      py::arg("model"), py::arg("observations"), py::arg("M1"), py::arg("M2"),
      py::arg("switch_step"), py::arg("seed"));

  m.def("a_statistic", [](double y, const std::vector<double>& fict) {
    return a_statistic(y, fict);
  });
  m.def("chi2_uniformity_pvalue",
        [](const std::vector<int>& a_values, int K) {
          return chi2_uniformity_pvalue(a_values, K);
        });
  m.def("lag_correlation",
        [](const std::vector<double>& values, int lag) -> py::object {
          const auto r = lag_correlation(values, lag);
          if (!r.has_value()) return py::none();
          return py::float_(*r);
        },
        py::arg("values"), py::arg("lag") = 1);
  m.def("empirical_pmf", [](const std::vector<int>& a_values, int K) {
    return empirical_pmf(a_values, K);
  });
  m.def("moment_check", [](const std::vector<double>& b_values, int n_max) {
    return moment_check(b_values, n_max);
  });
  m.def("chi2_sf", &chi2_sf);

  m.def(
      "kalman_filter",
      [](double a, double sigma_u, double sigma_v, double prior_mean,
         double prior_std, const std::vector<double>& observations) {
        const LgssParams params{a, sigma_u, sigma_v, prior_mean, prior_std};
        std::vector<double> post_mean, post_var, pred_mean, pred_var;
        KalmanState ks = kalman_init(params);
        for (double y : observations) {
          ks = kalman_step(params, ks, y);
          post_mean.push_back(ks.mean);
          post_var.push_back(ks.var);
          pred_mean.push_back(ks.pred_obs_mean);
          pred_var.push_back(ks.pred_obs_var);
        }
        py::dict out;
        out["posterior_mean"] = post_mean;
        out["posterior_var"] = post_var;
        out["pred_obs_mean"] = pred_mean;
        out["pred_obs_var"] = pred_var;
        return out;
      },
      py::arg("a"), py::arg("sigma_u"), py::arg("sigma_v"),
      py::arg("prior_mean"), py::arg("prior_std"), py::arg("observations"));

  m.def("exact_sampler_pmf", [](int K, int draws, std::uint64_t seed) {
    Rng rng(seed);
    return exact_sampler_pmf(K, draws, rng);
  });

  m.def(
      "run_config",
      [](const std::string& config_path, const std::string& out_path) {
        harness::ExperimentConfig cfg = harness::load_config(config_path);
        if (!out_path.empty()) cfg.out = out_path;
        const auto rows = harness::run_table(cfg);
        harness::write_outputs(cfg, rows, cfg.out);
        return cfg.out;
      },
      py::arg("config_path"), py::arg("out_path") = "");
}
