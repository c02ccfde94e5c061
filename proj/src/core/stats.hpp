#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pfopt::stats {

// ---- descriptive ----

double mean(std::span<const double> x);
double variance(std::span<const double> x, int ddof = 1);
double stdev(std::span<const double> x, int ddof = 1);
double excess_kurtosis(std::span<const double> x);

// Empirical quantile with linear interpolation between order statistics
// (Hyndman-Fan type 7: h = (n-1)p + 1).
double quantile_hf7(std::span<const double> x, double p);

// Normalized median absolute deviation about the median (x 1.4826).
double mad_scale(std::span<const double> x);

// Kendall tau-b via Knight's O(n log n) merge-sort inversion count.
double kendall_tau(std::span<const double> x, std::span<const double> y);

// ---- distributions ----

double norm_cdf(double x);
double norm_quantile(double p);

double lbeta(double a, double b);
// Regularized incomplete beta I_x(a, b).
double inc_beta(double a, double b, double x);

double t_logpdf(double x, double nu);
double t_pdf(double x, double nu);
double t_cdf(double x, double nu);
// Inverse CDF by safeguarded Newton inside an expanding bracket; converges
// to |F(x) - p| <= 1e-12 (or bracket width below 1e-12 relative).
double t_quantile(double p, double nu);

// Two-sided Kolmogorov-Smirnov statistic of a sample against U(0,1), and the
// asymptotic p-value of sqrt(n)*D.
double ks_statistic_uniform(std::vector<double> sample);
double ks_pvalue(double d, std::size_t n);

}  // namespace pfopt::stats
