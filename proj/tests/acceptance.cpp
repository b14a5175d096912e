// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Takes the experiment-config directory as its only argument
// (default "configs"). Single-threaded runtime is roughly ten minutes.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "pfadapt/adapt.hpp"
#include "pfadapt/harness.hpp"
#include "pfadapt/oracle.hpp"

using namespace pfadapt;

namespace {

constexpr std::uint64_t kSeed = 1;

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

void report(int id, const char* desc, bool ok, const std::string& details) {
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0)
          .count();
  std::printf("%s criterion %2d: %s  [%s; t=%.0fs]\n", ok ? "PASS" : "FAIL", id,
              desc, details.c_str(), elapsed);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

// 1. Uniform pmf of the A statistic under the exact sampler.
void criterion_1() {
  bool ok = true;
  std::string details;
  for (int K : {1, 3, 7, 20}) {
    Rng rng(mix_seed(kSeed, 1, static_cast<std::uint64_t>(K)));
    const auto f = exact_sampler_pmf(K, 100000, rng);
    double maxdev = 0.0;
    for (double x : f) maxdev = std::max(maxdev, std::fabs(x - 1.0 / (K + 1)));
    ok = ok && maxdev <= 0.01;
    details += fmt("K=%d dev=%.4f ", K, maxdev);
  }
  report(1, "exact-sampler A pmf uniform within 0.01", ok, details);
}

// 2. Independence of the exact-sampler A sequence (lag-1 correlation).
void criterion_2() {
  const double bound = 3.0 / std::sqrt(5000.0);
  int pass = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng rng(mix_seed(kSeed, 2, static_cast<std::uint64_t>(rep)));
    const auto seq = exact_sampler_sequence(7, 5000, rng);
    const std::vector<double> vals(seq.begin(), seq.end());
    const auto r = lag_correlation(vals, 1);
    if (r.has_value() && std::fabs(*r) < bound) ++pass;
  }
  report(2, "exact-sampler lag-1 |r| < 3/sqrt(5000) in >= 95/100 replicates",
         pass >= 95, fmt("pass=%d/100", pass));
}

// 3. Moments of the exact B statistic match 1/(j+1).
void criterion_3() {
  const LgssParams params{};
  LgssModel model(params);
  const int T = 5000;
  Rng rng(mix_seed(kSeed, 3));
  const Trajectory traj = simulate_data(model, T, rng);
  KalmanState ks = kalman_init(params);
  std::vector<double> b(T);
  for (int t = 0; t < T; ++t) {
    ks = kalman_step(params, ks, traj.observations[t]);
    b[static_cast<std::size_t>(t)] = exact_b(ks, traj.observations[t]);
  }
  const auto m = moment_check(b, 5);
  bool ok = true;
  std::string details;
  for (int j = 1; j <= 5; ++j) {
    double ss = 0.0;
    for (double v : b) {
      const double p = std::pow(v, j);
      ss += (p - m[static_cast<std::size_t>(j - 1)]) *
            (p - m[static_cast<std::size_t>(j - 1)]);
    }
    const double sd = std::sqrt(ss / (T - 1));
    const double gap = std::fabs(m[static_cast<std::size_t>(j - 1)] - 1.0 / (j + 1));
    ok = ok && gap < 5.0 * sd / std::sqrt(static_cast<double>(T));
    details += fmt("m%d=%.4f ", j, m[static_cast<std::size_t>(j - 1)]);
  }
  report(3, "exact-B sample moments match 1/(j+1), j=1..5", ok, details);
}

// 4. |B - A/K| decreases as c/sqrt(K) on the growth model.
void criterion_4() {
  GrowthModel model(GrowthModel::model1());
  const int M = 1 << 12, T = 100, runs = 20;
  const std::vector<int> Ks = {10, 100, 1000};
  const std::vector<double> targets = {0.0987, 0.0305, 0.0097};
  std::vector<double> gaps(Ks.size(), 0.0);
  long count = 0;
  for (int r = 0; r < runs; ++r) {
    Rng data_rng(mix_seed(kSeed, 4, static_cast<std::uint64_t>(r)));
    const Trajectory traj = simulate_data(model, T, data_rng);
    Rng rng(mix_seed(kSeed, 44, static_cast<std::uint64_t>(r)));
    ParticleSet ps = initialize(model, M, rng);
    for (int t = 0; t < T; ++t) {
      ps = propagate_and_weight(model, ps, traj.observations[t], rng);
      const PredictiveMixture pm(model, ps);
      const double b = b_statistic(pm, traj.observations[t]);
      for (std::size_t k = 0; k < Ks.size(); ++k) {
        const auto f = sample_fictitious(pm, Ks[k], rng);
        const double a = a_statistic(traj.observations[t], f);
        gaps[k] += std::fabs(a / Ks[k] - b);
      }
      ++count;
      ps = resample(ps, M, rng);
    }
  }
  bool ok = true;
  std::string details;
  for (std::size_t k = 0; k < Ks.size(); ++k) {
    gaps[k] /= static_cast<double>(count);
    ok = ok && gaps[k] > 0.7 * targets[k] && gaps[k] < 1.3 * targets[k];
    details += fmt("K=%d gap=%.4f ", Ks[k], gaps[k]);
  }
  for (std::size_t k = 1; k < Ks.size(); ++k) {
    const double ratio = gaps[k - 1] / gaps[k];
    ok = ok && ratio >= 2.5 && ratio <= 4.0;
    details += fmt("ratio=%.2f ", ratio);
  }
  report(4, "A/K -> B convergence rate matches the 1/sqrt(K) law", ok, details);
}

// 5 + 6 share one fixed-M sweep of the growth model.
void criteria_5_6() {
  GrowthModel model(GrowthModel::model1());
  const std::vector<int> Ms = {2, 16, 256, 4096};
  const int T = 1000, runs = 100, K = 7, W = 15;
  std::vector<double> mean_p(Ms.size(), 0.0), mean_r(Ms.size(), 0.0);
  for (std::size_t mi = 0; mi < Ms.size(); ++mi) {
    int r_count = 0;
    for (int r = 0; r < runs; ++r) {
      Rng data_rng(mix_seed(kSeed, 5, static_cast<std::uint64_t>(r)));
      const Trajectory traj = simulate_data(model, T, data_rng);
      AdaptPolicy policy;
      policy.method = AssessMethod::Fixed;
      policy.K = K;
      policy.W = W;
      policy.M_min = 1;
      policy.M_max = Ms[mi];
      policy.record_b = false;
      const RunTrace trace =
          run_adaptive_filter(model, traj.observations, policy, Ms[mi],
                              mix_seed(kSeed, 55, static_cast<std::uint64_t>(r)));
      double p = 0.0;
      for (const auto& blk : trace.blocks) {
        p += chi2_uniformity_pvalue(blk.window.a_values, K);
      }
      mean_p[mi] += p / static_cast<double>(trace.blocks.size());
      std::vector<double> avals;
      avals.reserve(trace.steps.size());
      for (const auto& s : trace.steps) avals.push_back(s.a);
      const auto rho = lag_correlation(avals, 1);
      if (rho.has_value()) {
        mean_r[mi] += std::fabs(*rho);
        ++r_count;
      }
    }
    mean_p[mi] /= runs;
    mean_r[mi] /= std::max(r_count, 1);
  }
  {
    bool ok = true;
    for (std::size_t i = 1; i < Ms.size(); ++i) ok = ok && mean_p[i] > mean_p[i - 1];
    ok = ok && mean_p[0] < 0.01;
    ok = ok && mean_p[3] >= 0.45 && mean_p[3] <= 0.70;
    report(5, "sweep mean p-values: increasing, <0.01 at M=2, [0.45,0.70] at M=4096",
           ok,
           fmt("p = %.4f %.4f %.4f %.4f", mean_p[0], mean_p[1], mean_p[2],
               mean_p[3]));
  }
  {
    bool ok = true;
    for (std::size_t i = 1; i < Ms.size(); ++i) ok = ok && mean_r[i] < mean_r[i - 1];
    ok = ok && mean_r[0] > 0.3 && mean_r[3] < 0.05;
    report(6, "sweep mean lag-1 |r|: decreasing, >0.3 at M=2, <0.05 at M=4096",
           ok,
           fmt("|r| = %.3f %.3f %.3f %.3f", mean_r[0], mean_r[1], mean_r[2],
               mean_r[3]));
  }
}

struct TwoPhaseResult {
  double m1 = 0.0, m2 = 0.0, tp = 0.0;
};

TwoPhaseResult two_phase(const std::string& model_name, int M1, int M2, int T,
                         int runs, int M_ref, std::uint64_t seed) {
  harness::ExperimentConfig cfg;
  cfg.model = model_name;
  cfg.mode = harness::Mode::TwoPhase;
  cfg.T = T;
  cfg.runs = runs;
  cfg.seed = seed;
  cfg.M_ref = M_ref;
  cfg.phase_pairs = {{M1, M2}};
  cfg.metrics = {"mse_m1", "mse_m2", "mse_two_phase"};
  TwoPhaseResult out;
  for (const auto& row : harness::run_table(cfg)) {
    if (row.metric == "mse_m1") out.m1 = row.value;
    if (row.metric == "mse_m2") out.m2 = row.value;
    if (row.metric == "mse_two_phase") out.tp = row.value;
  }
  return out;
}

// 7. Forgetting on the linear-Gaussian model, exact Kalman reference.
void criterion_7() {
  const auto r = two_phase("lgss", 100, 1000, 1000, 100, 0, mix_seed(kSeed, 7));
  const double rel = std::fabs(r.tp - r.m2) / r.m2;
  const double ratio = r.m1 / r.m2;
  const bool ok = rel <= 0.25 && ratio >= 5.0 && ratio <= 20.0;
  report(7, "lgss two-phase MSE matches constant-M2; MSE ratio in [5,20]", ok,
         fmt("m1=%.3e m2=%.3e tp=%.3e rel=%.3f ratio=%.1f", r.m1, r.m2, r.tp,
             rel, ratio));
}

// 8. Forgetting on the growth model, high-M surrogate reference.
void criterion_8() {
  const auto r =
      two_phase("growth1", 50, 1000, 1000, 20, 1 << 17, mix_seed(kSeed, 8));
  const double rel = std::fabs(r.tp - r.m2) / r.m2;
  const bool ok = rel <= 0.30 && r.m1 >= 5.0 * r.m2;
  report(8, "growth two-phase MSE matches constant-M2; M1=50 at least 5x worse",
         ok,
         fmt("m1=%.3e m2=%.3e tp=%.3e rel=%.3f m1/m2=%.1f", r.m1, r.m2, r.tp,
             rel, r.m1 / r.m2));
}

// 9. Adaptation stability: the stabilized M forgets M0; larger W demands
// a larger M. Arms share data and filter seeds (common random numbers).
void criterion_9() {
  GrowthModel model(GrowthModel::model1());
  const int T = 4000, runs = 20;
  auto arm = [&](int M0, int W) {
    double total = 0.0;
    for (int r = 0; r < runs; ++r) {
      Rng data_rng(mix_seed(kSeed, 9, static_cast<std::uint64_t>(r)));
      const Trajectory traj = simulate_data(model, T, data_rng);
      AdaptPolicy policy;
      policy.K = 7;
      policy.W = W;
      policy.record_b = false;
      const RunTrace trace =
          run_adaptive_filter(model, traj.observations, policy, M0,
                              mix_seed(kSeed, 99, static_cast<std::uint64_t>(r)));
      const std::size_t n = trace.blocks.size();
      const std::size_t take = std::min<std::size_t>(10, n);
      double sum = 0.0;
      for (std::size_t b = n - take; b < n; ++b) sum += trace.blocks[b].window.M;
      total += sum / static_cast<double>(take);
    }
    return total / runs;
  };
  const double m16 = arm(16, 50);
  const double m1024 = arm(1024, 50);
  const double w200 = arm(16, 200);
  const double rel = std::fabs(m16 - m1024) / std::max(m16, m1024);
  const bool ok = rel <= 0.25 && w200 > m16;
  report(9, "adaptive M forgets M0 (within 25%); W=200 stabilizes higher than W=50",
         ok, fmt("M0=16: %.0f, M0=1024: %.0f, rel=%.2f; W=200: %.0f", m16,
                 m1024, rel, w200));
}

// 10. Posterior-mean RMSE vs the Kalman oracle halves per 4x particles.
void criterion_10() {
  const LgssParams params{};
  LgssModel model(params);
  const int T = 200, runs = 50;
  std::vector<double> rmse;
  for (int M : {64, 256, 1024, 4096}) {
    double se = 0.0;
    long n = 0;
    for (int r = 0; r < runs; ++r) {
      Rng data_rng(mix_seed(kSeed, 10, static_cast<std::uint64_t>(r)));
      const Trajectory traj = simulate_data(model, T, data_rng);
      Rng rng(mix_seed(mix_seed(kSeed, 100, static_cast<std::uint64_t>(r)),
                       static_cast<std::uint64_t>(M)));
      ParticleSet ps = initialize(model, M, rng);
      KalmanState ks = kalman_init(params);
      for (int t = 0; t < T; ++t) {
        ps = propagate_and_weight(model, ps, traj.observations[t], rng);
        ks = kalman_step(params, ks, traj.observations[t]);
        const double d = posterior_mean(ps)(0) - ks.mean;
        se += d * d;
        ++n;
        ps = resample(ps, M, rng);
      }
    }
    rmse.push_back(std::sqrt(se / n));
  }
  bool ok = true;
  std::string details = fmt("rmse = %.4f %.4f %.4f %.4f;", rmse[0], rmse[1],
                            rmse[2], rmse[3]);
  for (std::size_t i = 1; i < rmse.size(); ++i) {
    const double ratio = rmse[i - 1] / rmse[i];
    ok = ok && ratio >= 1.4 && ratio <= 2.8;
    details += fmt(" ratio=%.2f", ratio);
  }
  report(10, "lgss RMSE vs Kalman halves per 4x increase in M", ok, details);
}

// 11. Byte-identical CSV on rerun with the same config and seed.
void criterion_11(const std::string& config_dir) {
  auto run_once = [&]() {
    harness::ExperimentConfig cfg =
        harness::load_config(config_dir + "/table2.cfg");
    cfg.T = 50;
    cfg.runs = 2;
    cfg.M_list = {2, 16};
    cfg.K_list = {7};
    return harness::csv_string(harness::run_table(cfg));
  };
  const std::string a = run_once();
  const std::string b = run_once();
  const bool ok = !a.empty() && a == b;
  report(11, "rerun with identical config and seed is byte-identical", ok,
         fmt("%zu bytes", a.size()));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string config_dir = argc > 1 ? argv[1] : "configs";
  g_t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criteria_5_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11(config_dir);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
