#pragma once

#include <span>
#include <vector>

namespace mixgeom {

/// Standard normal CDF via erfc.
double normal_cdf(double x);

double sample_mean(std::span<const double> xs);
/// Unbiased sample variance; zero for fewer than two values.
double sample_variance(std::span<const double> xs);

/// One-sample Kolmogorov distance between the empirical CDF of `xs` and the
/// standard normal CDF. Ties are handled exactly.
double ks_distance_to_normal(std::span<const double> xs);

/// (x - mean) / sd with the sample mean and sample standard deviation.
std::vector<double> standardize(std::span<const double> xs);

}  // namespace mixgeom
