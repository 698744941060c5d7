#include "sarinf/graph.hpp"

#include <cmath>
#include <sstream>

#include "sarinf/error.hpp"

namespace sarinf {

AdjacencyMatrix AdjacencyMatrix::from_dense(Eigen::MatrixXd entries) {
  require(entries.rows() == entries.cols(), "adjacency matrix must be square");
  const Eigen::Index n = entries.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    require(entries(i, i) == 0.0, "adjacency matrix must have a zero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = entries(i, j);
      require(a == 0.0 || a == 1.0, "adjacency entries must be 0 or 1");
      require(a == entries(j, i), "adjacency matrix must be symmetric");
    }
  }
  return AdjacencyMatrix(std::move(entries));
}

std::vector<std::pair<int, int>> AdjacencyMatrix::edges() const {
  std::vector<std::pair<int, int>> out;
  for (Eigen::Index i = 0; i < size(); ++i)
    for (Eigen::Index j = i + 1; j < size(); ++j)
      if (entries_(i, j) != 0.0) out.emplace_back(static_cast<int>(i + 1), static_cast<int>(j + 1));
  return out;
}

WeightMatrix WeightMatrix::from_dense(Eigen::MatrixXd entries) {
  require(entries.rows() == entries.cols(), "weight matrix must be square");
  const Eigen::Index n = entries.rows();
  require(n > 0, "weight matrix must be non-empty");
  for (Eigen::Index i = 0; i < n; ++i) {
    require(entries(i, i) == 0.0, "weight matrix must have a zero diagonal");
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = entries(i, j);
      require(std::isfinite(w) && w >= 0.0 && w <= 1.0,
              "weight entries must lie in [0, 1] (row " + std::to_string(i + 1) + ")");
      sum += w;
    }
    require(std::abs(sum - 1.0) <= kRowSumTolerance,
            "weight matrix row " + std::to_string(i + 1) + " does not sum to one");
  }
  return WeightMatrix(std::move(entries));
}

AdjacencyMatrix build_adjacency(std::span<const int> nodes, int n) {
  require(n > 0, "node count must be positive");
  require(nodes.size() % 2 == 0, "node sequence must have even length");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t t = 0; t < nodes.size(); t += 2) {
    const int u = nodes[t];
    const int v = nodes[t + 1];
    require(u >= 1 && u <= n && v >= 1 && v <= n,
            "node index out of range [1, " + std::to_string(n) + "] at position " +
                std::to_string(t + 1));
    if (u == v) continue;
    a(u - 1, v - 1) = 1.0;
    a(v - 1, u - 1) = 1.0;
  }
  return AdjacencyMatrix::from_dense(std::move(a));
}

WeightMatrix row_standardize(const AdjacencyMatrix& adjacency) {
  const Eigen::MatrixXd& a = adjacency.entries();
  const Eigen::VectorXd sums = a.rowwise().sum();
  std::ostringstream isolated;
  bool any = false;
  for (Eigen::Index i = 0; i < sums.size(); ++i) {
    if (sums(i) == 0.0) {
      isolated << (any ? ", " : "") << (i + 1);
      any = true;
    }
  }
  if (any)
    throw InvalidArgument("isolated node(s) " + isolated.str() +
                          " have no neighbours; cannot build a SAR weight matrix");
  Eigen::MatrixXd w = a.array().colwise() / sums.array();
  return WeightMatrix::from_dense(std::move(w));
}

}  // namespace sarinf
