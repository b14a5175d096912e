#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pfadapt/bpf.hpp"

namespace pfadapt {

// Per-block record of the statistic sequence S_n and test results.
struct WindowRecord {
  int n = 0;                    // block index
  int W = 0;                    // window length
  int M = 0;                    // particle count during the block
  std::vector<int> a_values;    // A statistics, each in {0..K}
  std::vector<double> b_values; // B statistics, each in [0,1] (may be empty)
  std::optional<double> p_value;
  std::optional<double> corr;
};

// Rank of y_t among the fictitious observations: the number of fictitious
// values strictly smaller than y_t. Result in {0, ..., K}.
int a_statistic(double y_t, std::span<const double> fictitious);

// Predictive-CDF statistic b_t^M = (1/M) sum_m F(y_t | xbar^(m)), in [0,1].
// Requires the model to expose a closed-form likelihood CDF.
double b_statistic(const PredictiveMixture& pm, double y_t);

// Pearson chi-square uniformity test over K+1 bins with K degrees of
// freedom; values must lie in {0, ..., K}.
double chi2_uniformity_pvalue(std::span<const int> a_values, int K);

// Chi-square p-value for observed bin counts against a uniform expectation;
// dof = bins - 1.
double chi2_counts_pvalue(std::span<const double> counts);

// Sample Pearson correlation at the given lag. Returns nullopt when either
// slice has zero variance (constant window) -- a distinct signal, not 0.
std::optional<double> lag_correlation(std::span<const double> values, int lag);

// Normalized histogram of a-values over {0..K}; sums to 1.
std::vector<double> empirical_pmf(std::span<const int> a_values, int K);

// Sample moments m_j = mean(b^j), j = 1..n_max. Under a calibrated filter
// m_j should be close to 1/(j+1).
std::vector<double> moment_check(std::span<const double> b_values, int n_max);

}  // namespace pfadapt
