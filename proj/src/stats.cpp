#include "mixgeom/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mixgeom/errors.hpp"

namespace mixgeom {

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

double ks_distance_to_normal(std::span<const double> xs) {
  if (xs.empty()) throw InvalidArgument("ks distance of an empty sample");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = normal_cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

std::vector<double> standardize(std::span<const double> xs) {
  const double mean = sample_mean(xs);
  const double sd = std::sqrt(sample_variance(xs));
  if (!(sd > 0.0)) {
    throw NumericFailure("cannot standardize: zero sample variance");
  }
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back((x - mean) / sd);
  return out;
}

}  // namespace mixgeom
