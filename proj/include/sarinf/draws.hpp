#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace sarinf {

/// Retained MCMC draws, one row per draw, columns (rho, sigma, beta0, ..., betak).
struct PosteriorDraws {
  Eigen::MatrixXd values;
  std::vector<int> chain_ids;  // 1-based chain label per row
  int n_chains = 0;
  std::uint64_t seed = 0;

  Eigen::Index n_draws() const { return values.rows(); }
  /// Number of regression coefficients including the intercept.
  Eigen::Index n_beta() const { return values.cols() - 2; }

  /// Checks column layout, parameter ranges and equal draws per chain.
  void validate() const;

  static std::vector<std::string> column_names(Eigen::Index n_beta);
};

}  // namespace sarinf
