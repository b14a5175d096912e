#pragma once

namespace pfadapt {

double normal_pdf(double x, double mean, double stddev);
double normal_cdf(double x, double mean, double stddev);

// Regularized lower incomplete gamma P(a, x), relative accuracy ~1e-12.
double gamma_p(double a, double x);
// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

// Survival function of the chi-square distribution with `dof` degrees of
// freedom, evaluated at `x`.
double chi2_sf(double x, int dof);

}  // namespace pfadapt
