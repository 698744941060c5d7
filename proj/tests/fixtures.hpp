#pragma once

// Small random SAR data sets shared by the unit tests.

#include <Eigen/Dense>
#include <random>

#include "sarinf/sar_model.hpp"
#include "sarinf/workload.hpp"

namespace fixtures {

inline sarinf::SarDataset random_dataset(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto weights = sarinf::row_standardize(sarinf::random_adjacency(n, seed + 1));
  Eigen::MatrixXd x(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) x(i, j) = normal(rng);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = normal(rng);
  return sarinf::SarDataset(y, x, weights);
}

inline sarinf::SarParams random_params(int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-0.9, 0.9);
  sarinf::SarParams p;
  p.rho = unit(rng);
  p.sigma = 0.5 + std::abs(unit(rng));
  p.beta = Eigen::VectorXd(k + 1);
  for (int j = 0; j <= k; ++j) p.beta(j) = 2.0 * unit(rng);
  return p;
}

}  // namespace fixtures
