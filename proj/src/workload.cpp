#include "sarinf/workload.hpp"

#include <random>
#include <vector>

#include "sarinf/error.hpp"

namespace sarinf {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

AdjacencyMatrix random_adjacency(int n, std::uint64_t seed) {
  require(n >= 2, "a random graph needs at least two nodes");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, n);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<int> nodes(static_cast<std::size_t>(4 * n));
    for (auto& v : nodes) v = pick(rng);
    AdjacencyMatrix a = build_adjacency(nodes, n);
    if ((a.entries().rowwise().sum().array() > 0.0).all()) return a;
  }
  throw NumericalError("could not draw a graph without isolated nodes");
}

Eigen::MatrixXd random_covariates(int n, int k, std::uint64_t seed) {
  require(n > 0 && k >= 0, "covariate dimensions must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, k);
  for (int j = 0; j < k; ++j) {
    const double mu = (j % 2 == 0) ? -1.0 : 2.0;
    for (int i = 0; i < n; ++i) x(i, j) = mu + normal(rng);
  }
  return x;
}

Workload simulate_workload(int n, int n_covariates, const SarParams& params, std::uint64_t seed,
                           std::optional<int> contaminate_at) {
  params.validate();
  const auto used = static_cast<int>(params.beta.size()) - 1;
  require(used <= n_covariates, "beta needs more covariates than generated");
  AdjacencyMatrix adjacency = random_adjacency(n, derive_seed(seed, 0));
  WeightMatrix weights = row_standardize(adjacency);
  Eigen::MatrixXd covariates = random_covariates(n, n_covariates, derive_seed(seed, 1));
  Eigen::VectorXd y =
      sar_simulate(weights, covariates.leftCols(used), params, derive_seed(seed, 2));
  std::optional<Eigen::VectorXd> z;
  if (contaminate_at) z = contaminate(y, *contaminate_at);
  return {std::move(adjacency), std::move(weights), std::move(covariates), std::move(y),
          std::move(z)};
}

}  // namespace sarinf
