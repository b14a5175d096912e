#include "pfadapt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pfadapt/bpf.hpp"
#include "pfadapt/oracle.hpp"

namespace pfadapt::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

Mode parse_mode(const std::string& s) {
  if (s == "sweep" || s == "fixed-sweep") return Mode::Sweep;
  if (s == "adaptive") return Mode::Adaptive;
  if (s == "two-phase") return Mode::TwoPhase;
  throw std::invalid_argument("unknown mode: " + s);
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Sweep: return "sweep";
    case Mode::Adaptive: return "adaptive";
    case Mode::TwoPhase: return "two-phase";
  }
  return "?";
}

bool is_model_param(const std::string& key) {
  static const char* names[] = {"a",     "sigma_u",    "sigma_v",     "prior_mean",
                                "prior_std", "phi",    "sigma",       "rho",
                                "beta",  "delta",      "t_obs",       "sigma2_obs",
                                "sigma2_state"};
  for (const char* n : names) {
    if (key == n) return true;
  }
  return false;
}

std::vector<std::string> default_metrics(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case Mode::Sweep: return {"mean_pvalue", "abs_corr"};
    case Mode::Adaptive: return {"mean_m_last"};
    case Mode::TwoPhase: return {"mse_m1", "mse_m2", "mse_two_phase"};
  }
  return {};
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  long n = 0;
  for (double x : v) {
    if (std::isnan(x)) continue;
    s += x;
    ++n;
  }
  return n > 0 ? s / n : kNaN;
}

double stderr_of(const std::vector<double>& v, double mean) {
  double ss = 0.0;
  long n = 0;
  for (double x : v) {
    if (std::isnan(x)) continue;
    ss += (x - mean) * (x - mean);
    ++n;
  }
  if (n < 2) return 0.0;
  return std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
}

std::string fmt_double(double x) {
  char buf[40];
  if (std::isnan(x)) return "nan";
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// Runs fn(r) for r in [0, runs) on worker threads; results are written into
// index-addressed slots by the callee, so aggregation order is deterministic
// regardless of scheduling.
template <typename Fn>
void parallel_replicates(int runs, Fn&& fn) {
  unsigned n_threads = std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(runs));
  if (n_threads <= 1) {
    for (int r = 0; r < runs; ++r) fn(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned i = 0; i < n_threads; ++i) {
    pool.emplace_back([&] {
      for (int r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) fn(r);
    });
  }
  for (auto& th : pool) th.join();
}

bool wants(const std::vector<std::string>& metrics, const std::string& name) {
  return std::find(metrics.begin(), metrics.end(), name) != metrics.end();
}

double mse_last_quarter(const std::vector<double>& pred,
                        const std::vector<double>& ref) {
  const auto T = pred.size();
  const std::size_t first = 3 * T / 4;
  double s = 0.0;
  for (std::size_t t = first; t < T; ++t) {
    const double d = pred[t] - ref[t];
    s += d * d;
  }
  return s / static_cast<double>(T - first);
}

}  // namespace

AssessMethod parse_method(const std::string& name) {
  if (name == "uniformity-a") return AssessMethod::UniformityA;
  if (name == "correlation-a") return AssessMethod::CorrelationA;
  if (name == "uniformity-b") return AssessMethod::UniformityB;
  if (name == "fixed") return AssessMethod::Fixed;
  throw std::invalid_argument("unknown method: " + name);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  cfg.metrics.clear();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "name" || key == "experiment") cfg.name = value;
      else if (key == "model") cfg.model = value;
      else if (key == "mode") cfg.mode = parse_mode(value);
      else if (key == "T") cfg.T = std::stoi(value);
      else if (key == "runs") cfg.runs = std::stoi(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "W") cfg.W = std::stoi(value);
      else if (key == "K" || key == "K_list") {
        cfg.K_list.clear();
        for (const auto& p : split(value, ',')) cfg.K_list.push_back(std::stoi(p));
      } else if (key == "M" || key == "M_list") {
        cfg.M_list.clear();
        for (const auto& p : split(value, ',')) cfg.M_list.push_back(std::stoll(p));
      } else if (key == "M0" || key == "M0_list") {
        cfg.M0_list.clear();
        for (const auto& p : split(value, ',')) cfg.M0_list.push_back(std::stoi(p));
      } else if (key == "W_list") {
        cfg.W_list.clear();
        for (const auto& p : split(value, ',')) cfg.W_list.push_back(std::stoi(p));
      } else if (key == "pairs") {
        cfg.phase_pairs.clear();
        for (const auto& p : split(value, ',')) {
          const auto colon = p.find(':');
          if (colon == std::string::npos) {
            throw std::invalid_argument("pairs entries must be M1:M2");
          }
          cfg.phase_pairs.emplace_back(std::stoi(p.substr(0, colon)),
                                       std::stoi(p.substr(colon + 1)));
        }
      } else if (key == "M_ref") cfg.M_ref = std::stoi(value);
      else if (key == "p_low") cfg.p_low = std::stod(value);
      else if (key == "p_high") cfg.p_high = std::stod(value);
      else if (key == "M_min") cfg.M_min = std::stoi(value);
      else if (key == "M_max") cfg.M_max = std::stoi(value);
      else if (key == "scale") cfg.scale = std::stod(value);
      else if (key == "method") cfg.method = value;
      else if (key == "last_windows") cfg.last_windows = std::stoi(value);
      else if (key == "metrics") cfg.metrics = split(value, ',');
      else if (key == "out") cfg.out = value;
      else if (is_model_param(key)) cfg.model_overrides[key] = std::stod(value);
      else throw std::invalid_argument("unknown key: " + key);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  if (cfg.T < 1) throw std::runtime_error(path + ": T must be >= 1");
  if (cfg.runs < 1) throw std::runtime_error(path + ": runs must be >= 1");
  if (cfg.metrics.empty()) cfg.metrics = default_metrics(cfg);
  return cfg;
}

std::unique_ptr<Model> make_model(const ExperimentConfig& cfg) {
  const auto& ov = cfg.model_overrides;
  auto get = [&](const char* key, double dflt) {
    const auto it = ov.find(key);
    return it != ov.end() ? it->second : dflt;
  };
  if (cfg.model == "lgss") {
    LgssParams p;
    p.a = get("a", p.a);
    p.sigma_u = get("sigma_u", p.sigma_u);
    p.sigma_v = get("sigma_v", p.sigma_v);
    p.prior_mean = get("prior_mean", p.prior_mean);
    p.prior_std = get("prior_std", p.prior_std);
    return std::make_unique<LgssModel>(p);
  }
  if (cfg.model == "growth1" || cfg.model == "growth2") {
    GrowthParams p =
        cfg.model == "growth1" ? GrowthModel::model1() : GrowthModel::model2();
    p.phi = get("phi", p.phi);
    p.sigma_u = get("sigma_u", p.sigma_u);
    p.sigma_v = get("sigma_v", p.sigma_v);
    return std::make_unique<GrowthModel>(p);
  }
  if (cfg.model == "lorenz63") {
    Lorenz63Params p;
    p.sigma = get("sigma", p.sigma);
    p.rho = get("rho", p.rho);
    p.beta = get("beta", p.beta);
    p.delta = get("delta", p.delta);
    p.t_obs = get("t_obs", p.t_obs);
    p.sigma2_obs = get("sigma2_obs", p.sigma2_obs);
    p.sigma2_state = get("sigma2_state", p.sigma2_state);
    return std::make_unique<Lorenz63Model>(p);
  }
  throw std::invalid_argument("unknown model: " + cfg.model);
}

std::vector<GridCell> make_grid(const ExperimentConfig& cfg) {
  std::vector<GridCell> grid;
  switch (cfg.mode) {
    case Mode::Sweep:
      for (long long M : cfg.M_list) {
        for (int K : cfg.K_list) {
          grid.push_back({grid.size(), M, K, cfg.W, -1, -1});
        }
      }
      break;
    case Mode::Adaptive: {
      const std::vector<int> ws =
          cfg.W_list.empty() ? std::vector<int>{cfg.W} : cfg.W_list;
      for (int M0 : cfg.M0_list) {
        for (int K : cfg.K_list) {
          for (int W : ws) {
            grid.push_back({grid.size(), M0, K, W, -1, -1});
          }
        }
      }
      break;
    }
    case Mode::TwoPhase:
      if (cfg.phase_pairs.empty()) {
        throw std::runtime_error("two-phase mode requires 'pairs = M1:M2,...'");
      }
      for (const auto& [m1, m2] : cfg.phase_pairs) {
        if (m1 < 1 || m2 < 1) throw std::runtime_error("two-phase counts must be >= 1");
        grid.push_back({grid.size(), -1, -1, -1, m1, m2});
      }
      break;
  }
  return grid;
}

std::vector<std::uint64_t> replicate_seeds(std::uint64_t base,
                                           std::uint64_t cell, int runs) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) {
    seeds[static_cast<std::size_t>(r)] =
        mix_seed(base, cell + 1, static_cast<std::uint64_t>(r) + 1);
  }
  return seeds;
}

namespace {

CellResults run_sweep_cell(const ExperimentConfig& cfg, const GridCell& cell) {
  const auto model = make_model(cfg);
  const bool want_ab = wants(cfg.metrics, "ab_gap");
  const bool want_mse =
      wants(cfg.metrics, "mse_pred") || wants(cfg.metrics, "mse_post");
  if (want_mse && cfg.model != "lgss") {
    throw std::runtime_error("mse_pred/mse_post metrics require the lgss model");
  }

  CellResults res;
  for (const auto& m : cfg.metrics) {
    res[m].assign(static_cast<std::size_t>(cfg.runs), kNaN);
  }
  const auto seeds = replicate_seeds(cfg.seed, cell.index, cfg.runs);

  parallel_replicates(cfg.runs, [&](int r) {
    const std::uint64_t rs = seeds[static_cast<std::size_t>(r)];
    Rng data_rng(mix_seed(rs, 0x64617461ULL));
    const Trajectory traj = simulate_data(*model, cfg.T, data_rng);

    AdaptPolicy policy;
    policy.method = AssessMethod::Fixed;
    policy.K = cell.K;
    policy.W = cell.W;
    policy.M_min = 1;
    policy.M_max = static_cast<int>(cell.M);
    policy.record_a = true;
    policy.record_b = want_ab && model->has_likelihood_cdf();
    const RunTrace trace =
        run_adaptive_filter(*model, traj.observations, policy,
                            static_cast<int>(cell.M), mix_seed(rs, 0x66696c74ULL));
    if (trace.diverged) return;  // flagged: NaN slots stay

    const auto idx = static_cast<std::size_t>(r);
    if (wants(cfg.metrics, "mean_pvalue")) {
      double sum = 0.0;
      for (const auto& blk : trace.blocks) {
        sum += chi2_uniformity_pvalue(blk.window.a_values, cell.K);
      }
      res["mean_pvalue"][idx] =
          trace.blocks.empty() ? kNaN : sum / static_cast<double>(trace.blocks.size());
    }
    if (wants(cfg.metrics, "abs_corr")) {
      std::vector<double> avals;
      avals.reserve(trace.steps.size());
      for (const auto& s : trace.steps) avals.push_back(s.a);
      const auto rho = lag_correlation(avals, 1);
      res["abs_corr"][idx] = rho.has_value() ? std::fabs(*rho) : kNaN;
    }
    if (want_ab) {
      double gap = 0.0;
      for (const auto& s : trace.steps) {
        gap += std::fabs(s.b - static_cast<double>(s.a) / cell.K);
      }
      res["ab_gap"][idx] = gap / static_cast<double>(trace.steps.size());
    }
    if (want_mse) {
      LgssParams params = static_cast<const LgssModel&>(*model).params();
      KalmanState ks = kalman_init(params);
      double se_pred = 0.0, se_post = 0.0;
      for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        ks = kalman_step(params, ks, traj.observations[t]);
        const double dp = trace.steps[t].pred_obs_mean - ks.pred_obs_mean;
        const double dm = trace.steps[t].mean(0) - ks.mean;
        se_pred += dp * dp;
        se_post += dm * dm;
      }
      const auto n = static_cast<double>(trace.steps.size());
      if (wants(cfg.metrics, "mse_pred")) res["mse_pred"][idx] = se_pred / n;
      if (wants(cfg.metrics, "mse_post")) res["mse_post"][idx] = se_post / n;
    }
  });
  return res;
}

CellResults run_adaptive_cell(const ExperimentConfig& cfg, const GridCell& cell) {
  const auto model = make_model(cfg);
  CellResults res;
  for (const auto& m : cfg.metrics) {
    res[m].assign(static_cast<std::size_t>(cfg.runs), kNaN);
  }
  const auto seeds = replicate_seeds(cfg.seed, cell.index, cfg.runs);

  parallel_replicates(cfg.runs, [&](int r) {
    const std::uint64_t rs = seeds[static_cast<std::size_t>(r)];
    Rng data_rng(mix_seed(rs, 0x64617461ULL));
    const Trajectory traj = simulate_data(*model, cfg.T, data_rng);

    AdaptPolicy policy;
    policy.method = parse_method(cfg.method);
    policy.K = cell.K;
    policy.W = cell.W;
    policy.p_low = cfg.p_low;
    policy.p_high = cfg.p_high;
    policy.M_min = cfg.M_min;
    policy.M_max = cfg.M_max;
    policy.scale = cfg.scale;
    policy.record_b = false;
    const RunTrace trace =
        run_adaptive_filter(*model, traj.observations, policy,
                            static_cast<int>(cell.M), mix_seed(rs, 0x66696c74ULL));
    if (trace.diverged) return;

    const auto idx = static_cast<std::size_t>(r);
    if (wants(cfg.metrics, "mean_m_last")) {
      const std::size_t n_blocks = trace.blocks.size();
      const std::size_t take =
          std::min<std::size_t>(static_cast<std::size_t>(cfg.last_windows), n_blocks);
      double sum = 0.0;
      for (std::size_t b = n_blocks - take; b < n_blocks; ++b) {
        sum += trace.blocks[b].window.M;
      }
      res["mean_m_last"][idx] = take > 0 ? sum / static_cast<double>(take) : kNaN;
    }
    if (wants(cfg.metrics, "mean_pvalue")) {
      double sum = 0.0;
      long n = 0;
      for (const auto& blk : trace.blocks) {
        if (blk.window.p_value.has_value()) {
          sum += *blk.window.p_value;
          ++n;
        }
      }
      res["mean_pvalue"][idx] = n > 0 ? sum / n : kNaN;
    }
  });
  return res;
}

CellResults run_two_phase_cell(const ExperimentConfig& cfg, const GridCell& cell) {
  const auto model = make_model(cfg);
  CellResults res;
  for (const auto& m : cfg.metrics) {
    res[m].assign(static_cast<std::size_t>(cfg.runs), kNaN);
  }
  const auto seeds = replicate_seeds(cfg.seed, cell.index, cfg.runs);
  const int switch_step = cfg.T / 2;

  parallel_replicates(cfg.runs, [&](int r) {
    const std::uint64_t rs = seeds[static_cast<std::size_t>(r)];
    Rng data_rng(mix_seed(rs, 0x64617461ULL));
    const Trajectory traj = simulate_data(*model, cfg.T, data_rng);
    const auto& obs = traj.observations;

    // Reference predictive-observation means: exact Kalman for lgss, a
    // large-M bootstrap filter as surrogate ground truth otherwise.
    std::vector<double> ref(obs.size());
    if (cfg.model == "lgss") {
      const LgssParams params = static_cast<const LgssModel&>(*model).params();
      KalmanState ks = kalman_init(params);
      for (std::size_t t = 0; t < obs.size(); ++t) {
        ks = kalman_step(params, ks, obs[t]);
        ref[t] = ks.pred_obs_mean;
      }
    } else {
      Rng ref_rng(mix_seed(rs, 0x72656665ULL));
      ref = pf_predictive_means(*model, obs, cfg.M_ref, cfg.M_ref, cfg.T + 1,
                                ref_rng);
    }

    const auto idx = static_cast<std::size_t>(r);
    auto run_variant = [&](int m1, int m2, int sw, std::uint64_t tag) {
      Rng rng(mix_seed(rs, tag));
      return mse_last_quarter(pf_predictive_means(*model, obs, m1, m2, sw, rng),
                              ref);
    };
    if (wants(cfg.metrics, "mse_m1")) {
      res["mse_m1"][idx] = run_variant(cell.M1, cell.M1, cfg.T + 1, 0x6d310000ULL);
    }
    if (wants(cfg.metrics, "mse_m2")) {
      res["mse_m2"][idx] = run_variant(cell.M2, cell.M2, cfg.T + 1, 0x6d320000ULL);
    }
    if (wants(cfg.metrics, "mse_two_phase")) {
      res["mse_two_phase"][idx] =
          run_variant(cell.M1, cell.M2, switch_step, 0x74700000ULL);
    }
  });
  return res;
}

}  // namespace

CellResults run_cell(const ExperimentConfig& cfg, const GridCell& cell) {
  switch (cfg.mode) {
    case Mode::Sweep: return run_sweep_cell(cfg, cell);
    case Mode::Adaptive: return run_adaptive_cell(cfg, cell);
    case Mode::TwoPhase: return run_two_phase_cell(cfg, cell);
  }
  throw std::logic_error("run_cell: unknown mode");
}

std::vector<TableRow> run_table(const ExperimentConfig& cfg) {
  const auto grid = make_grid(cfg);
  std::vector<TableRow> rows;
  for (const auto& cell : grid) {
    const CellResults results = run_cell(cfg, cell);
    long long diverged = 0;
    for (const auto& metric : cfg.metrics) {
      const auto it = results.find(metric);
      if (it == results.end()) continue;
      const double mean = mean_of(it->second);
      TableRow row;
      row.model = cfg.model;
      row.M = cfg.mode == Mode::TwoPhase
                  ? (metric == "mse_m1" ? cell.M1 : cell.M2)
                  : cell.M;
      row.K = cell.K;
      row.W = cell.W;
      row.metric = metric;
      row.value = mean;
      row.stderr_ = stderr_of(it->second, mean);
      row.runs = cfg.runs;
      row.seed = cfg.seed;
      rows.push_back(std::move(row));
      long long nan_count = 0;
      for (double v : it->second) {
        if (std::isnan(v)) ++nan_count;
      }
      diverged = std::max(diverged, nan_count);
    }
    if (diverged > 0) {
      TableRow row;
      row.model = cfg.model;
      row.M = cell.M >= 0 ? cell.M : cell.M2;
      row.K = cell.K;
      row.W = cell.W;
      row.metric = "diverged_runs";
      row.value = static_cast<double>(diverged);
      row.stderr_ = 0.0;
      row.runs = cfg.runs;
      row.seed = cfg.seed;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string csv_string(const std::vector<TableRow>& rows) {
  std::string out = "model,M,K,W,metric,value,stderr,runs,seed\n";
  for (const auto& r : rows) {
    out += r.model;
    out += ',';
    if (r.M >= 0) out += std::to_string(r.M);
    out += ',';
    if (r.K >= 0) out += std::to_string(r.K);
    out += ',';
    if (r.W >= 0) out += std::to_string(r.W);
    out += ',';
    out += r.metric;
    out += ',';
    out += fmt_double(r.value);
    out += ',';
    out += fmt_double(r.stderr_);
    out += ',';
    out += std::to_string(r.runs);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::string describe(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "name: " << cfg.name << "\n"
     << "model: " << cfg.model << "\n"
     << "mode: " << mode_name(cfg.mode) << "\n"
     << "T: " << cfg.T << "\nruns: " << cfg.runs << "\nseed: " << cfg.seed
     << "\nmethod: " << cfg.method << "\nmetrics:";
  for (const auto& m : cfg.metrics) os << ' ' << m;
  os << "\ngrid:\n";
  for (const auto& cell : make_grid(cfg)) {
    os << "  cell " << cell.index;
    if (cfg.mode == Mode::TwoPhase) {
      os << " M1=" << cell.M1 << " M2=" << cell.M2 << " switch=T/2";
    } else {
      os << (cfg.mode == Mode::Adaptive ? " M0=" : " M=") << cell.M
         << " K=" << cell.K << " W=" << cell.W;
    }
    os << "\n";
  }
  for (const auto& [k, v] : cfg.model_overrides) {
    os << "override " << k << " = " << fmt_double(v) << "\n";
  }
  return os.str();
}

void write_outputs(const ExperimentConfig& cfg,
                   const std::vector<TableRow>& rows,
                   const std::string& out_path) {
  {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + out_path);
    out << csv_string(rows);
  }
  const std::string meta_path = out_path + ".meta.txt";
  std::ofstream meta(meta_path, std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write sidecar file: " + meta_path);
  meta << "pfadapt " << kVersion << "\n" << describe(cfg);
}

}  // namespace pfadapt::harness
