#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sarinf {

/// Symmetric binary adjacency with zero diagonal.
class AdjacencyMatrix {
 public:
  /// Validates symmetry, zero diagonal and {0,1} entries.
  static AdjacencyMatrix from_dense(Eigen::MatrixXd entries);

  Eigen::Index size() const { return entries_.rows(); }
  const Eigen::MatrixXd& entries() const { return entries_; }

  /// Undirected edges (i < j), 1-based, in row-major order.
  std::vector<std::pair<int, int>> edges() const;

 private:
  explicit AdjacencyMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}
  Eigen::MatrixXd entries_;
};

/// Row-stochastic spatial weights with zero diagonal.
class WeightMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  /// Validates zero diagonal, entries in [0, 1] and unit row sums.
  static WeightMatrix from_dense(Eigen::MatrixXd entries);

  Eigen::Index size() const { return entries_.rows(); }
  const Eigen::MatrixXd& entries() const { return entries_; }

 private:
  explicit WeightMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}
  Eigen::MatrixXd entries_;
};

/// Consecutive pairs (nodes[2t], nodes[2t+1]) of 1-based indices become
/// undirected edges. Repeated edges collapse; self-pairs are dropped.
AdjacencyMatrix build_adjacency(std::span<const int> nodes, int n);

/// Divides each row by its sum. Throws InvalidArgument naming isolated nodes.
WeightMatrix row_standardize(const AdjacencyMatrix& adjacency);

}  // namespace sarinf
