#pragma once

#include <vector>

namespace ipr {

double normal_pdf(double x, double mean = 0.0, double sigma = 1.0);
double normal_log_pdf(double x, double mean = 0.0, double sigma = 1.0);
double normal_cdf(double x, double mean = 0.0, double sigma = 1.0);

// Regularized lower incomplete gamma P(a, x). Series expansion for
// x < a + 1, continued fraction otherwise.
double gamma_p(double a, double x);

// CDF of the chi-square distribution with `dof` degrees of freedom.
double chi2_cdf(double x, int dof);

// Quantile (inverse CDF) by bisection; p in (0, 1).
double chi2_quantile(double p, int dof);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased, n >= 2

// Two-sided p-value for the difference of means of two samples
// (Welch statistic with a normal approximation; intended for large n).
double welch_p_value(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ipr
