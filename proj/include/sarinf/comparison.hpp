#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace sarinf {

struct WaicResult {
  double waic = 0.0;
  double waic_se = 0.0;
  double p_waic = 0.0;
  double lppd = 0.0;
};

struct LooResult {
  double loo = 0.0;
  double loo_se = 0.0;
  double term_one = 0.0;
  double term_two = 0.0;
};

/// ll is S x n with entry (s, i) = log p(y_i | theta^s). Requires S >= 2.
WaicResult waic(const Eigen::MatrixXd& ll);

/// Leave-one-out criterion with the double-sum second term. The draws of the
/// posterior without observation i are represented by self-normalized
/// importance weights proportional to 1/p(y_i | theta^s), truncated at
/// mean * S^(3/4).
LooResult loo_cv(const Eigen::MatrixXd& ll);

/// log of the normalized truncated importance weights for observation i.
Eigen::VectorXd loo_log_weights(const Eigen::MatrixXd& ll, Eigen::Index i);

struct ComparisonEntry {
  std::string label;
  double waic = 0.0;
  double waic_se = 0.0;
  double p_waic = 0.0;
  double loo = 0.0;
  double loo_se = 0.0;
  double loo_term_one = 0.0;  // conventional LOOIC
};

ComparisonEntry make_entry(std::string label, const Eigen::MatrixXd& ll);

struct ComparisonReport {
  std::vector<ComparisonEntry> table;  // sorted by loo ascending (stable)
  std::string csv;                     // model,criterion,estimate,se
  std::string svg;
};

ComparisonReport compare(std::vector<ComparisonEntry> entries);

}  // namespace sarinf
