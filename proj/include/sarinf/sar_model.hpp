#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>
#include <cstdint>

#include "sarinf/draws.hpp"
#include "sarinf/graph.hpp"

namespace sarinf {

/// Outcomes y, covariates X (without intercept) and weights W.
class SarDataset {
 public:
  SarDataset(Eigen::VectorXd y, Eigen::MatrixXd covariates, WeightMatrix weights);

  Eigen::Index n() const { return y_.size(); }
  /// Number of covariates, excluding the intercept.
  Eigen::Index k() const { return covariates_.cols(); }

  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::MatrixXd& covariates() const { return covariates_; }
  const WeightMatrix& weights() const { return weights_; }
  /// [1 | X], n x (k+1).
  const Eigen::MatrixXd& design() const { return design_; }
  /// Spatial lag W y.
  const Eigen::VectorXd& lag() const { return lag_; }

  /// Copy with y replaced; covariates and weights are shared by value.
  SarDataset with_outcomes(Eigen::VectorXd y) const;

 private:
  Eigen::VectorXd y_;
  Eigen::MatrixXd covariates_;
  WeightMatrix weights_;
  Eigen::MatrixXd design_;
  Eigen::VectorXd lag_;
};

struct SarParams {
  double rho = 0.0;
  double sigma = 1.0;
  Eigen::VectorXd beta;  // intercept first

  void validate() const;
  /// Unpacks one draws row (rho, sigma, beta...).
  static SarParams from_row(const Eigen::Ref<const Eigen::RowVectorXd>& row);
};

/// sigma^2 ~ IG(a, b), beta ~ N(0, eta I).
struct PriorConfig {
  double a = 0.01;
  double b = 0.01;
  double eta = 1.0e4;

  void validate() const;
};

/// LU factorization of I - rho W; rejects numerically singular systems.
class SpatialFilter {
 public:
  static constexpr double kMinReciprocalCondition = 1e-12;

  SpatialFilter(const WeightMatrix& weights, double rho,
                double min_rcond = kMinReciprocalCondition);

  double rcond() const { return rcond_; }

  /// Solves (I - rho W) x = rhs.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_ = 0.0;
};

/// y = (I - rho W)^{-1} (X beta + eps) for a given noise vector.
Eigen::VectorXd sar_simulate_with_noise(const WeightMatrix& weights,
                                        const Eigen::MatrixXd& covariates,
                                        const SarParams& params,
                                        const Eigen::VectorXd& noise);

/// Draws eps ~ N(0, sigma^2 I) from a generator seeded with `seed`.
Eigen::VectorXd sar_simulate(const WeightMatrix& weights, const Eigen::MatrixXd& covariates,
                             const SarParams& params, std::uint64_t seed);

/// The noise vector sar_simulate draws for (n, sigma, seed).
Eigen::VectorXd simulation_noise(Eigen::Index n, double sigma, std::uint64_t seed);

/// Adds the `level` quantile of y (or the 1 - level quantile when y[1] <= 0)
/// to the observation at 1-based `position`.
Eigen::VectorXd contaminate(const Eigen::VectorXd& y, int position, double level = 0.99);

/// Gaussian log-likelihood of the residual y - X beta - rho W y (no Jacobian).
double log_likelihood(const SarDataset& data, const SarParams& params);

/// Per-observation terms of log_likelihood.
Eigen::VectorXd pointwise_log_likelihood(const SarDataset& data, const SarParams& params);

/// Uniform(-1,1) on rho + N(0, eta I) on beta + IG(a, b) on sigma^2.
double log_prior(const SarParams& params, const PriorConfig& prior);

double log_posterior_kernel(const SarDataset& data, const SarParams& params,
                            const PriorConfig& prior);

/// Reduced-form mean (I - rho W)^{-1} X beta.
Eigen::VectorXd fitted_values(const SarDataset& data, const SarParams& params);

/// Conditional mean rho (W y)_i + x_i' beta. W has a zero diagonal, so
/// element i does not depend on y_i.
Eigen::VectorXd conditional_mean(const SarDataset& data, const SarParams& params);

enum class ImputationMethod { Mean = 1, Median = 2 };

enum class ImputationBasis {
  Conditional,  // conditional_mean per draw
  ReducedForm,  // fitted_values per draw
};

/// Element-wise mean or median over posterior draws of the per-draw
/// prediction selected by `basis`.
Eigen::VectorXd impute_yhat(const SarDataset& data, const PosteriorDraws& draws,
                            ImputationMethod method,
                            ImputationBasis basis = ImputationBasis::Conditional,
                            int threads = 1);

/// S x n matrix of pointwise log-likelihoods, one row per draw.
Eigen::MatrixXd pointwise_log_likelihood_matrix(const SarDataset& data,
                                                const PosteriorDraws& draws);

}  // namespace sarinf
