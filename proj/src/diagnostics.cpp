#include "pfadapt/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "pfadapt/special.hpp"

namespace pfadapt {

int a_statistic(double y_t, std::span<const double> fictitious) {
  if (fictitious.empty()) throw std::invalid_argument("a_statistic: K must be >= 1");
  int count = 0;
  for (double v : fictitious) {
    if (v < y_t) ++count;
  }
  return count;
}

double b_statistic(const PredictiveMixture& pm, double y_t) {
  const auto& states = pm.states();
  const Model& model = pm.model();
  double sum = 0.0;
  for (Eigen::Index m = 0; m < states.cols(); ++m) {
    sum += model.likelihood_cdf(y_t, states.col(m), pm.t());
  }
  return sum / static_cast<double>(states.cols());
}

double chi2_counts_pvalue(std::span<const double> counts) {
  const int bins = static_cast<int>(counts.size());
  if (bins < 2) throw std::invalid_argument("chi2_counts_pvalue: need >= 2 bins");
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) throw std::invalid_argument("chi2_counts_pvalue: empty sample");
  const double expected = total / bins;
  double stat = 0.0;
  for (double c : counts) {
    const double d = c - expected;
    stat += d * d / expected;
  }
  return chi2_sf(stat, bins - 1);
}

double chi2_uniformity_pvalue(std::span<const int> a_values, int K) {
  if (K < 1) throw std::invalid_argument("chi2_uniformity_pvalue: K must be >= 1");
  if (a_values.empty()) throw std::invalid_argument("chi2_uniformity_pvalue: empty sample");
  std::vector<double> counts(static_cast<std::size_t>(K) + 1, 0.0);
  for (int a : a_values) {
    if (a < 0 || a > K) {
      throw std::domain_error("chi2_uniformity_pvalue: value outside {0..K}");
    }
    counts[static_cast<std::size_t>(a)] += 1.0;
  }
  return chi2_counts_pvalue(counts);
}

std::optional<double> lag_correlation(std::span<const double> values, int lag) {
  const auto n = static_cast<long>(values.size());
  if (lag < 1 || n <= lag + 1) {
    throw std::invalid_argument("lag_correlation: need length > lag + 1");
  }
  const long m = n - lag;
  double mean_x = 0.0, mean_y = 0.0;
  for (long i = 0; i < m; ++i) {
    mean_x += values[static_cast<std::size_t>(i)];
    mean_y += values[static_cast<std::size_t>(i + lag)];
  }
  mean_x /= m;
  mean_y /= m;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (long i = 0; i < m; ++i) {
    const double dx = values[static_cast<std::size_t>(i)] - mean_x;
    const double dy = values[static_cast<std::size_t>(i + lag)] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> empirical_pmf(std::span<const int> a_values, int K) {
  if (K < 1) throw std::invalid_argument("empirical_pmf: K must be >= 1");
  if (a_values.empty()) throw std::invalid_argument("empirical_pmf: empty sample");
  std::vector<double> freq(static_cast<std::size_t>(K) + 1, 0.0);
  for (int a : a_values) {
    if (a < 0 || a > K) throw std::domain_error("empirical_pmf: value outside {0..K}");
    freq[static_cast<std::size_t>(a)] += 1.0;
  }
  const double n = static_cast<double>(a_values.size());
  for (auto& f : freq) f /= n;
  return freq;
}

std::vector<double> moment_check(std::span<const double> b_values, int n_max) {
  if (n_max < 1) throw std::invalid_argument("moment_check: n_max must be >= 1");
  if (b_values.empty()) throw std::invalid_argument("moment_check: empty sample");
  std::vector<double> moments(static_cast<std::size_t>(n_max), 0.0);
  for (double b : b_values) {
    double p = 1.0;
    for (int j = 0; j < n_max; ++j) {
      p *= b;
      moments[static_cast<std::size_t>(j)] += p;
    }
  }
  const double n = static_cast<double>(b_values.size());
  for (auto& m : moments) m /= n;
  return moments;
}

}  // namespace pfadapt
