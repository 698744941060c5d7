#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sarinf/comparison.hpp"
#include "sarinf/divergence.hpp"
#include "sarinf/draws.hpp"
#include "sarinf/graph.hpp"
#include "sarinf/sampler.hpp"

namespace sarinf::io {

/// Headerless numeric CSV. Errors carry the file name and line number.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
Eigen::MatrixXd parse_matrix_csv(const std::string& text, const std::string& source);
std::string format_matrix_csv(const Eigen::MatrixXd& m);

Eigen::VectorXd read_vector_csv(const std::filesystem::path& path);

std::string format_edges_csv(const AdjacencyMatrix& adjacency);

/// Draws with header "rho,sigma,beta0,...,chain".
std::string format_draws_csv(const PosteriorDraws& draws);
PosteriorDraws read_draws_csv(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);

/// Buffers output files and writes them only on commit(), so a failing
/// command leaves no partial output behind.
class OutputSet {
 public:
  void add(std::string name, std::string contents);
  /// Creates `dir` if needed and writes every buffered file.
  void commit(const std::filesystem::path& dir) const;
  const std::map<std::string, std::string>& files() const { return files_; }

 private:
  std::map<std::string, std::string> files_;
};

}  // namespace sarinf::io
