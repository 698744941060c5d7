#include "sarinf/sar_model.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <random>

#include "sarinf/error.hpp"
#include "sarinf/parallel.hpp"
#include "sarinf/stats.hpp"

namespace sarinf {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

Eigen::VectorXd residual(const SarDataset& data, const SarParams& params) {
  return data.y() - params.rho * data.lag() - data.design() * params.beta;
}

void check_beta(const SarDataset& data, const SarParams& params) {
  require(params.beta.size() == data.k() + 1,
          "beta has " + std::to_string(params.beta.size()) + " entries, expected " +
              std::to_string(data.k() + 1) + " (intercept + covariates)");
}

}  // namespace

void PosteriorDraws::validate() const {
  require(values.cols() >= 3, "draws need at least the columns rho, sigma, beta0");
  require(values.rows() > 0, "draws are empty");
  require(static_cast<Eigen::Index>(chain_ids.size()) == values.rows(),
          "chain labels do not match the number of draws");
  for (Eigen::Index s = 0; s < values.rows(); ++s) {
    require(values(s, 0) > -1.0 && values(s, 0) < 1.0, "draw has rho outside (-1, 1)");
    require(values(s, 1) > 0.0, "draw has non-positive sigma");
  }
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(std::max(n_chains, 0)), 0);
  for (int c : chain_ids) {
    require(c >= 1 && c <= n_chains, "chain label out of range");
    ++counts[static_cast<std::size_t>(c - 1)];
  }
  for (auto count : counts) require(count == counts.front(), "chains have unequal draw counts");
}

std::vector<std::string> PosteriorDraws::column_names(Eigen::Index n_beta) {
  std::vector<std::string> names{"rho", "sigma"};
  for (Eigen::Index j = 0; j < n_beta; ++j) names.push_back("beta" + std::to_string(j));
  return names;
}

SarDataset::SarDataset(Eigen::VectorXd y, Eigen::MatrixXd covariates, WeightMatrix weights)
    : y_(std::move(y)), covariates_(std::move(covariates)), weights_(std::move(weights)) {
  const Eigen::Index n = y_.size();
  require(n > 0, "dataset has no observations");
  if (covariates_.size() == 0) covariates_.resize(n, 0);
  require(covariates_.rows() == n, "X has " + std::to_string(covariates_.rows()) +
                                       " rows but y has " + std::to_string(n) + " entries");
  require(weights_.size() == n, "W is " + std::to_string(weights_.size()) + "x" +
                                    std::to_string(weights_.size()) + " but y has " +
                                    std::to_string(n) + " entries");
  require(y_.allFinite() && covariates_.allFinite(), "dataset contains non-finite values");
  design_.resize(n, covariates_.cols() + 1);
  design_.col(0).setOnes();
  design_.rightCols(covariates_.cols()) = covariates_;
  lag_ = weights_.entries() * y_;
}

SarDataset SarDataset::with_outcomes(Eigen::VectorXd y) const {
  return SarDataset(std::move(y), covariates_, weights_);
}

void SarParams::validate() const {
  require(rho > -1.0 && rho < 1.0, "rho must lie in (-1, 1)");
  require(sigma > 0.0 && std::isfinite(sigma), "sigma must be positive");
  require(beta.size() >= 1 && beta.allFinite(), "beta must be a finite non-empty vector");
}

SarParams SarParams::from_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  require(row.size() >= 3, "parameter row needs rho, sigma and at least beta0");
  SarParams p;
  p.rho = row(0);
  p.sigma = row(1);
  p.beta = row.tail(row.size() - 2).transpose();
  return p;
}

void PriorConfig::validate() const {
  require(a > 0.0 && b > 0.0 && eta > 0.0, "prior hyperparameters a, b, eta must be positive");
}

SpatialFilter::SpatialFilter(const WeightMatrix& weights, double rho, double min_rcond) {
  const Eigen::Index n = weights.size();
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - rho * weights.entries();
  lu_.compute(system);
  rcond_ = lu_.rcond();
  if (!(rcond_ >= min_rcond))
    throw NumericalError(fmt::format(
        "I - rho W is numerically singular at rho = {:.10g} (reciprocal condition {:.3g} < {:.3g})",
        rho, rcond_, min_rcond));
}

Eigen::VectorXd SpatialFilter::solve(const Eigen::VectorXd& rhs) const { return lu_.solve(rhs); }

Eigen::VectorXd sar_simulate_with_noise(const WeightMatrix& weights,
                                        const Eigen::MatrixXd& covariates,
                                        const SarParams& params,
                                        const Eigen::VectorXd& noise) {
  params.validate();
  const Eigen::Index n = weights.size();
  require(noise.size() == n, "noise length does not match W");
  const SarDataset shape(Eigen::VectorXd::Zero(n), covariates, weights);
  check_beta(shape, params);
  const SpatialFilter filter(weights, params.rho);
  return filter.solve(shape.design() * params.beta + noise);
}

Eigen::VectorXd simulation_noise(Eigen::Index n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  Eigen::VectorXd eps(n);
  for (Eigen::Index i = 0; i < n; ++i) eps(i) = normal(rng);
  return eps;
}

Eigen::VectorXd sar_simulate(const WeightMatrix& weights, const Eigen::MatrixXd& covariates,
                             const SarParams& params, std::uint64_t seed) {
  params.validate();
  return sar_simulate_with_noise(weights, covariates, params,
                                 simulation_noise(weights.size(), params.sigma, seed));
}

Eigen::VectorXd contaminate(const Eigen::VectorXd& y, int position, double level) {
  require(position >= 1 && position <= y.size(),
          "contamination position " + std::to_string(position) + " outside [1, " +
              std::to_string(y.size()) + "]");
  require(level > 0.0 && level < 1.0, "contamination level must lie in (0, 1)");
  const std::span<const double> values(y.data(), static_cast<std::size_t>(y.size()));
  const double shift = y(0) > 0.0 ? quantile(values, level) : quantile(values, 1.0 - level);
  Eigen::VectorXd z = y;
  z(position - 1) += shift;
  return z;
}

double log_likelihood(const SarDataset& data, const SarParams& params) {
  check_beta(data, params);
  const Eigen::VectorXd r = residual(data, params);
  const double s2 = params.sigma * params.sigma;
  const auto n = static_cast<double>(data.n());
  return -0.5 * n * (kLogTwoPi + std::log(s2)) - r.squaredNorm() / (2.0 * s2);
}

Eigen::VectorXd pointwise_log_likelihood(const SarDataset& data, const SarParams& params) {
  check_beta(data, params);
  const Eigen::VectorXd r = residual(data, params);
  const double s2 = params.sigma * params.sigma;
  return (-0.5 * (kLogTwoPi + std::log(s2)) - r.array().square() / (2.0 * s2)).matrix();
}

double log_prior(const SarParams& params, const PriorConfig& prior) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (!(params.rho > -1.0 && params.rho < 1.0) || !(params.sigma > 0.0)) return kNegInf;
  const double log_rho = -std::log(2.0);
  const auto p = static_cast<double>(params.beta.size());
  const double log_beta =
      -0.5 * p * (kLogTwoPi + std::log(prior.eta)) - params.beta.squaredNorm() / (2.0 * prior.eta);
  const double s2 = params.sigma * params.sigma;
  const double log_s2 = prior.a * std::log(prior.b) - std::lgamma(prior.a) -
                        (prior.a + 1.0) * std::log(s2) - prior.b / s2;
  return log_rho + log_beta + log_s2;
}

double log_posterior_kernel(const SarDataset& data, const SarParams& params,
                            const PriorConfig& prior) {
  const double lp = log_prior(params, prior);
  if (!std::isfinite(lp)) return lp;
  return log_likelihood(data, params) + lp;
}

Eigen::VectorXd fitted_values(const SarDataset& data, const SarParams& params) {
  params.validate();
  check_beta(data, params);
  const SpatialFilter filter(data.weights(), params.rho);
  return filter.solve(data.design() * params.beta);
}

Eigen::VectorXd conditional_mean(const SarDataset& data, const SarParams& params) {
  check_beta(data, params);
  return params.rho * data.lag() + data.design() * params.beta;
}

Eigen::VectorXd impute_yhat(const SarDataset& data, const PosteriorDraws& draws,
                            ImputationMethod method, ImputationBasis basis, int threads) {
  require(draws.n_draws() > 0, "cannot impute from empty draws");
  const Eigen::Index S = draws.n_draws();
  const Eigen::Index n = data.n();
  Eigen::MatrixXd fitted(n, S);
  parallel_for(static_cast<std::size_t>(S), threads, [&](std::size_t s) {
    const auto idx = static_cast<Eigen::Index>(s);
    const SarParams params = SarParams::from_row(draws.values.row(idx));
    fitted.col(idx) = basis == ImputationBasis::Conditional ? conditional_mean(data, params)
                                                            : fitted_values(data, params);
  });
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::RowVectorXd row = fitted.row(i);
    const std::span<const double> values(row.data(), static_cast<std::size_t>(S));
    out(i) = method == ImputationMethod::Mean ? mean(values) : median(values);
  }
  return out;
}

Eigen::MatrixXd pointwise_log_likelihood_matrix(const SarDataset& data,
                                                const PosteriorDraws& draws) {
  Eigen::MatrixXd ll(draws.n_draws(), data.n());
  for (Eigen::Index s = 0; s < draws.n_draws(); ++s)
    ll.row(s) = pointwise_log_likelihood(data, SarParams::from_row(draws.values.row(s))).transpose();
  return ll;
}

}  // namespace sarinf
