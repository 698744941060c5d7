#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sarinf/draws.hpp"
#include "sarinf/sar_model.hpp"

namespace sarinf {

enum class ProposalKind {
  Diagonal,  // per-coordinate scales from burn-in variances
  Dense,     // full covariance from burn-in draws
};

struct SamplerOptions {
  int n_chains = 2;
  int n_iter = 10000;  // per chain, first half discarded
  std::uint64_t seed = 0;
  int threads = 0;     // <= 0: hardware concurrency
  ProposalKind proposal = ProposalKind::Diagonal;
  double target_acceptance = 0.234;
  /// Metropolis steps per iteration; <= 0 means one per parameter.
  int steps_per_iteration = 0;

  void validate() const;
};

/// Unconstrained-space draws from a generic random-walk Metropolis run.
struct ChainOutput {
  Eigen::MatrixXd draws;          // retained draws, chain-major
  std::vector<int> chain_ids;     // 1-based
  std::vector<double> acceptance; // post-burn-in acceptance rate per step, per chain
};

using LogTarget = std::function<double(const Eigen::VectorXd&)>;
/// Produces a starting point from the chain's generator; called again on a
/// non-finite target, up to 100 times.
using Initializer = std::function<Eigen::VectorXd(std::mt19937_64&)>;

/// Adaptive random-walk Metropolis. Each iteration is a composite transition
/// of `steps_per_iteration` Metropolis steps; one state is recorded per
/// iteration. The proposal (global log step size by
/// Robbins-Monro plus per-coordinate or full covariance) adapts during
/// burn-in and is frozen for the retained half. Chain c draws from a
/// generator seeded with (seed, c), so results do not depend on threading.
ChainOutput sample_adaptive_rwm(const LogTarget& log_target, const Initializer& init,
                                const Eigen::VectorXd& initial_scales,
                                const SamplerOptions& options);

struct FitResult {
  PosteriorDraws draws;
  std::vector<double> acceptance;
};

/// Posterior draws of (rho, sigma, beta) for the SAR kernel. Sampling runs on
/// (atanh rho, log sigma, beta) with the transform's log-Jacobian added.
FitResult fit(const SarDataset& data, const PriorConfig& prior, const SamplerOptions& options);

struct SummaryRow {
  std::string parameter;
  double mean = 0.0;
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
  double ess = 0.0;
  double rhat = 1.0;
};

/// Split-chain potential scale reduction. Constant chains give 1.
double rhat(std::span<const double> column, std::span<const int> chain_ids);

/// Multi-chain effective sample size with Geyer's initial positive sequence,
/// capped at the total draw count. Constant columns give S.
double ess(std::span<const double> column, std::span<const int> chain_ids);

std::vector<SummaryRow> summarize(const PosteriorDraws& draws);

}  // namespace sarinf
