#include "sarinf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sarinf/error.hpp"

namespace sarinf {

double quantile(std::span<const double> values, double prob) {
  require(!values.empty(), "quantile of an empty sample");
  require(prob >= 0.0 && prob <= 1.0, "quantile probability outside [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double mean(std::span<const double> values) {
  require(!values.empty(), "mean of an empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  // Shifted by the first value: constant input gives exactly zero.
  const double shift = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - shift;
  const double m = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - shift - m) * (v - shift - m);
  return ss / static_cast<double>(values.size() - 1);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

double log_sum_exp(std::span<const double> values) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : values) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

double log_mean_exp(std::span<const double> values) {
  require(!values.empty(), "log_mean_exp of an empty sample");
  return log_sum_exp(values) - std::log(static_cast<double>(values.size()));
}

}  // namespace sarinf
