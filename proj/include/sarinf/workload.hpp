#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "sarinf/graph.hpp"
#include "sarinf/sar_model.hpp"

namespace sarinf {

/// Independent child seed for a named stream (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Random graph from 4n node indices drawn uniformly with replacement and
/// paired consecutively. Draws are repeated until no node is isolated.
AdjacencyMatrix random_adjacency(int n, std::uint64_t seed);

/// n x k covariates; column j is N(mean_j, 1) with means cycling (-1, 2).
Eigen::MatrixXd random_covariates(int n, int k, std::uint64_t seed);

/// Simulated SAR data set with an optional contaminated copy of y.
struct Workload {
  AdjacencyMatrix adjacency;
  WeightMatrix weights;
  Eigen::MatrixXd covariates;  // all generated columns
  Eigen::VectorXd y;
  std::optional<Eigen::VectorXd> z;
};

/// y uses the first `params.beta.size() - 1` covariate columns; `n_covariates`
/// columns are generated in total. Graph, covariates and noise use separate
/// streams derived from `seed`.
Workload simulate_workload(int n, int n_covariates, const SarParams& params, std::uint64_t seed,
                           std::optional<int> contaminate_at = std::nullopt);

}  // namespace sarinf
