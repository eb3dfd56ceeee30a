#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sibm::stats {

// Standard normal distribution function Phi.
double normal_cdf(double x);

// Quantile of the standard normal, full double precision on (0,1).
double inverse_normal_cdf(double p);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Quantile of the chi-square distribution with (possibly fractional)
// degrees of freedom.
double chi_square_quantile(double p, double df);

// Distribution function of the Kolmogorov statistic, P(K <= x), and its
// quantile.
double kolmogorov_cdf(double x);
double kolmogorov_quantile(double p);

// One-sample KS distance of a sample against the standard normal.
double ks_distance_normal(std::vector<double> sample);

// Two-sample KS distance; handles ties.
double ks_distance_two_sample(std::vector<double> a, std::vector<double> b);

struct Summary {
  std::size_t n = 0;
  double mean = 0;
  double sd = 0;
  double min = 0;
  double q25 = 0;
  double median = 0;
  double q75 = 0;
  double max = 0;
};

Summary summarize(std::vector<double> values);

double mean(std::span<const double> values);
// Sample standard error of the mean (unbiased variance, divided by sqrt n).
double stderr_of_mean(std::span<const double> values);

}  // namespace sibm::stats
