#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pfadapt/diagnostics.hpp"
#include "pfadapt/oracle.hpp"
#include "pfadapt/special.hpp"

using namespace pfadapt;

TEST_CASE("a_statistic: counts, boundaries, rank invariance") {
  const std::vector<double> f{0.1, 0.2, 0.7};
  CHECK(a_statistic(0.5, f) == 2);
  const std::vector<double> five{1, 2, 3, 4, 5};
  CHECK(a_statistic(0.0, five) == 0);
  CHECK(a_statistic(9.0, five) == 5);
  CHECK_THROWS_AS(a_statistic(0.0, std::vector<double>{}), std::invalid_argument);

  std::vector<double> mapped;
  for (double v : f) mapped.push_back(std::exp(v));
  CHECK(a_statistic(std::exp(0.5), mapped) == a_statistic(0.5, f));
}

TEST_CASE("b_statistic: symmetry, limits, monotonicity") {
  LgssModel m(LgssParams{});
  ParticleSet ps;
  ps.states.resize(1, 3);
  ps.states << -1.0, 0.5, 2.0;
  ps.weights = Eigen::VectorXd::Constant(3, 1.0 / 3);
  ps.t = 1;
  PredictiveMixture pm(m, ps);

  {
    ParticleSet one;
    one.states.resize(1, 1);
    one.states(0, 0) = 0.7;
    one.weights = Eigen::VectorXd::Ones(1);
    one.t = 1;
    PredictiveMixture single(m, one);
    CHECK(b_statistic(single, 0.7) == doctest::Approx(0.5).epsilon(1e-14));
  }
  CHECK(b_statistic(pm, 2.0 + 1e9) == doctest::Approx(1.0).epsilon(1e-12));
  double prev = -1.0;
  for (double y = -6.0; y <= 8.0; y += 0.5) {
    const double b = b_statistic(pm, y);
    CHECK(b >= prev);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
    prev = b;
  }
}

TEST_CASE("chi2_uniformity_pvalue: exact cases and errors") {
  {
    std::vector<int> a;
    for (int v = 0; v <= 7; ++v) {
      a.push_back(v);
      a.push_back(v);
    }
    CHECK(chi2_uniformity_pvalue(a, 7) == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    const std::vector<int> a(20, 3);  // chi2 = 140
    CHECK(chi2_uniformity_pvalue(a, 7) ==
          doctest::Approx(5.082977510439557e-27).epsilon(1e-10));
    CHECK(chi2_uniformity_pvalue(a, 7) < 1e-20);
  }
  {
    // permutation invariance
    std::vector<int> a{0, 7, 3, 3, 1, 5, 2, 6, 4, 0, 7, 1};
    const double p1 = chi2_uniformity_pvalue(a, 7);
    std::sort(a.begin(), a.end());
    CHECK(chi2_uniformity_pvalue(a, 7) == p1);
  }
  const std::vector<int> bad{0, 8};
  CHECK_THROWS_AS(chi2_uniformity_pvalue(bad, 7), std::domain_error);
}

TEST_CASE("chi2_sf and normal_cdf match frozen references") {
  CHECK(chi2_sf(140.0, 7) == doctest::Approx(5.082977510439557e-27).epsilon(1e-12));
  CHECK(chi2_sf(7.0, 7) == doctest::Approx(0.42887985755305486).epsilon(1e-12));
  CHECK(chi2_sf(1.5, 1) == doctest::Approx(0.22067136191984324).epsilon(1e-12));
  CHECK(chi2_sf(25.0, 10) == doctest::Approx(0.005345505487134069).epsilon(1e-12));
  CHECK(normal_cdf(1.96, 0.0, 1.0) ==
        doctest::Approx(0.9750021048517795).epsilon(1e-14));
  CHECK(normal_cdf(-3.1, 0.0, 1.0) ==
        doctest::Approx(0.0009676032132183563).epsilon(1e-13));
  CHECK(gamma_p(3.5, 2.2) == doctest::Approx(0.2672769164361349).epsilon(1e-12));
  CHECK(gamma_q(0.5, 4.0) == doctest::Approx(0.004677734981047276).epsilon(1e-12));
  CHECK(gamma_p(2.0, 1.0) + gamma_q(2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(chi2_sf(1.0, 0), std::domain_error);
}

TEST_CASE("lag_correlation: exact, null, degenerate") {
  {
    std::vector<double> alt;
    for (int i = 0; i < 40; ++i) alt.push_back(i % 2);
    const auto r = lag_correlation(alt, 1);
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(-1.0).epsilon(1e-12));
  }
  {
    Rng rng(1);
    std::vector<double> u(5000);
    for (auto& v : u) v = rng.uniform();
    const auto r = lag_correlation(u, 1);
    REQUIRE(r.has_value());
    CHECK(std::fabs(*r) < 0.05);
  }
  {
    const std::vector<double> c(50, 3.0);
    CHECK_FALSE(lag_correlation(c, 1).has_value());
  }
  const std::vector<double> tiny{1.0, 2.0};
  CHECK_THROWS_AS(lag_correlation(tiny, 1), std::invalid_argument);
}

TEST_CASE("empirical_pmf: point mass, normalization, uniform sampler") {
  {
    const std::vector<int> a{3};
    const auto pmf = empirical_pmf(a, 7);
    REQUIRE(pmf.size() == 8);
    CHECK(pmf[3] == 1.0);
    for (int i = 0; i < 8; ++i) {
      if (i != 3) CHECK(pmf[i] == 0.0);
    }
  }
  {
    Rng rng(2);
    const auto freq = exact_sampler_pmf(7, 100000, rng);
    double sum = 0.0;
    for (double f : freq) {
      CHECK(f > 0.115);
      CHECK(f < 0.135);
      sum += f;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  const std::vector<int> bad{-1};
  CHECK_THROWS_AS(empirical_pmf(bad, 7), std::domain_error);
}

TEST_CASE("moment_check: degenerate and uniform samples") {
  {
    const std::vector<double> ones(10, 1.0);
    for (double m : moment_check(ones, 4)) CHECK(m == 1.0);
  }
  {
    Rng rng(3);
    std::vector<double> u(100000);
    for (auto& v : u) v = rng.uniform();
    const auto m = moment_check(u, 3);
    REQUIRE(m.size() == 3);
    CHECK(m[1] > 0.330);
    CHECK(m[1] < 0.337);
  }
}

TEST_CASE("A/K converges to B for a fixed mixture") {
  LgssModel m(LgssParams{0.9, 0.7, 1.0, 0.0, 1.0});
  ParticleSet ps;
  ps.states.resize(1, 8);
  ps.states << -2, -1, -0.5, 0, 0.3, 1, 1.7, 2.5;
  ps.weights = Eigen::VectorXd::Constant(8, 1.0 / 8);
  ps.t = 1;
  PredictiveMixture pm(m, ps);
  const double y = 0.4;
  const double b = b_statistic(pm, y);

  Rng rng(4);
  auto mean_gap = [&](int K) {
    const int reps = 2000;
    double gap = 0.0;
    for (int i = 0; i < reps; ++i) {
      const auto f = sample_fictitious(pm, K, rng);
      gap += std::fabs(static_cast<double>(a_statistic(y, f)) / K - b);
    }
    return gap / reps;
  };
  const double g250 = mean_gap(250);
  const double g1000 = mean_gap(1000);
  const double per_doubling = std::sqrt(g250 / g1000);  // two doublings
  CHECK(per_doubling > 1.25);
  CHECK(per_doubling < 1.6);
}

TEST_CASE("p-values are near-uniform under the exact sampler") {
  Rng rng(5);
  const int windows = 500, W = 80, K = 7;
  int below = 0;
  for (int w = 0; w < windows; ++w) {
    const auto seq = exact_sampler_sequence(K, W, rng);
    if (chi2_uniformity_pvalue(seq, K) < 0.1) ++below;
  }
  const double frac = static_cast<double>(below) / windows;
  CHECK(frac > 0.06);
  CHECK(frac < 0.14);
}
