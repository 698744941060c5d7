#pragma once

#include <span>
#include <vector>

namespace sarinf {

/// Sample quantile by linear interpolation of order statistics (type 7).
double quantile(std::span<const double> values, double prob);

double mean(std::span<const double> values);

/// Sample variance with denominator n - 1; zero for fewer than two values.
double sample_variance(std::span<const double> values);

double median(std::span<const double> values);

/// log(sum(exp(values))) with max-shift; -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

/// log(mean(exp(values))).
double log_mean_exp(std::span<const double> values);

}  // namespace sarinf
