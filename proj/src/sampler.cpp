#include "sarinf/sampler.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "sarinf/error.hpp"
#include "sarinf/parallel.hpp"

namespace sarinf {

namespace {

constexpr int kMaxInitAttempts = 100;

struct SingleChain {
  Eigen::MatrixXd draws;
  double acceptance = 0.0;
};

// Welford running mean / covariance.
class RunningMoments {
 public:
  explicit RunningMoments(Eigen::Index dim)
      : mean_(Eigen::VectorXd::Zero(dim)), m2_(Eigen::MatrixXd::Zero(dim, dim)) {}

  void push(const Eigen::VectorXd& x) {
    ++count_;
    const Eigen::VectorXd delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_).transpose();
  }

  long count() const { return count_; }
  Eigen::MatrixXd covariance() const { return m2_ / static_cast<double>(count_ - 1); }

 private:
  long count_ = 0;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd m2_;
};

SingleChain run_chain(const LogTarget& log_target, const Initializer& init,
                      const Eigen::VectorXd& initial_scales, const SamplerOptions& options,
                      int chain) {
  std::seed_seq seq{static_cast<std::uint32_t>(options.seed & 0xffffffffU),
                    static_cast<std::uint32_t>(options.seed >> 32),
                    static_cast<std::uint32_t>(chain)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;

  Eigen::VectorXd current;
  double current_lp = -std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < kMaxInitAttempts && !std::isfinite(current_lp); ++attempt) {
    current = init(rng);
    current_lp = log_target(current);
  }
  if (!std::isfinite(current_lp))
    throw NumericalError("log posterior is not finite at any of " +
                         std::to_string(kMaxInitAttempts) +
                         " initial points; check the data and prior");

  const Eigen::Index dim = current.size();
  require(initial_scales.size() == dim, "initial scales do not match the parameter dimension");
  const int burn_in = options.n_iter / 2;
  // Covariance estimates start after this many burn-in iterations.
  const int warmup_window = std::max(50, burn_in / 10);

  double log_step = std::log(2.38 / std::sqrt(static_cast<double>(dim)));
  Eigen::MatrixXd chol = initial_scales.asDiagonal();
  RunningMoments moments(dim);

  SingleChain out;
  out.draws.resize(options.n_iter - burn_in, dim);
  long accepted = 0;
  Eigen::VectorXd noise(dim);

  const int steps = options.steps_per_iteration > 0 ? options.steps_per_iteration
                                                    : static_cast<int>(dim);
  long adapt_step = 0;
  for (int t = 0; t < options.n_iter; ++t) {
    for (int step = 0; step < steps; ++step) {
      for (Eigen::Index j = 0; j < dim; ++j) noise(j) = normal(rng);
      const Eigen::VectorXd proposal = current + std::exp(log_step) * (chol * noise);
      const double proposal_lp = log_target(proposal);
      const double log_ratio = proposal_lp - current_lp;
      const double accept_prob =
          std::isfinite(proposal_lp) ? std::exp(std::min(0.0, log_ratio)) : 0.0;
      if (uniform(rng) < accept_prob) {
        current = proposal;
        current_lp = proposal_lp;
        if (t >= burn_in) ++accepted;
      }
      if (t < burn_in) {
        ++adapt_step;
        log_step += std::pow(static_cast<double>(adapt_step), -0.6) *
                    (accept_prob - options.target_acceptance);
      }
    }

    if (t < burn_in) {
      // Early burn-in is transient; restart the covariance estimate halfway.
      if (t == burn_in / 2) moments = RunningMoments(dim);
      moments.push(current);
      if (moments.count() >= 50 && t + 1 >= warmup_window && (t + 1) % 50 == 0) {
        const Eigen::MatrixXd cov =
            moments.covariance() + 1e-10 * Eigen::MatrixXd::Identity(dim, dim);
        if (options.proposal == ProposalKind::Dense) {
          const Eigen::LLT<Eigen::MatrixXd> llt(cov);
          if (llt.info() == Eigen::Success) chol = llt.matrixL();
        } else {
          chol = cov.diagonal().cwiseSqrt().asDiagonal();
        }
      }
    } else {
      out.draws.row(t - burn_in) = current.transpose();
    }
  }
  out.acceptance = static_cast<double>(accepted) /
                   static_cast<double>(static_cast<long>(options.n_iter - burn_in) * steps);
  return out;
}

}  // namespace

void SamplerOptions::validate() const {
  require(n_chains >= 2 && n_chains <= 4, "n_chains must be between 2 and 4");
  require(n_iter >= 200 && n_iter % 2 == 0, "n_iter must be even and at least 200");
  require(steps_per_iteration <= 1000, "steps_per_iteration must be at most 1000");
  require(target_acceptance > 0.0 && target_acceptance < 1.0,
          "target acceptance must lie in (0, 1)");
}

ChainOutput sample_adaptive_rwm(const LogTarget& log_target, const Initializer& init,
                                const Eigen::VectorXd& initial_scales,
                                const SamplerOptions& options) {
  options.validate();
  std::vector<SingleChain> chains(static_cast<std::size_t>(options.n_chains));
  parallel_for(chains.size(), options.threads, [&](std::size_t c) {
    chains[c] = run_chain(log_target, init, initial_scales, options, static_cast<int>(c) + 1);
  });

  const Eigen::Index per_chain = chains.front().draws.rows();
  ChainOutput out;
  out.draws.resize(per_chain * options.n_chains, chains.front().draws.cols());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    out.draws.middleRows(static_cast<Eigen::Index>(c) * per_chain, per_chain) = chains[c].draws;
    out.chain_ids.insert(out.chain_ids.end(), static_cast<std::size_t>(per_chain),
                         static_cast<int>(c) + 1);
    out.acceptance.push_back(chains[c].acceptance);
  }
  return out;
}

FitResult fit(const SarDataset& data, const PriorConfig& prior, const SamplerOptions& options) {
  prior.validate();
  options.validate();
  const Eigen::Index p = data.k() + 1;
  const Eigen::Index dim = p + 2;

  // Least-squares start for beta, ignoring the spatial lag.
  const Eigen::MatrixXd& design = data.design();
  const Eigen::VectorXd beta_ols = design.colPivHouseholderQr().solve(data.y());
  const Eigen::VectorXd resid = data.y() - design * beta_ols;
  const double dof = std::max<double>(1.0, static_cast<double>(data.n() - p));
  const double sigma_ols = std::max(std::sqrt(resid.squaredNorm() / dof), 1e-3);
  const Eigen::MatrixXd xtx_inv =
      (design.transpose() * design + 1e-8 * Eigen::MatrixXd::Identity(p, p)).inverse();
  Eigen::VectorXd beta_se = (sigma_ols * xtx_inv.diagonal().cwiseSqrt()).cwiseMax(1e-3);

  auto to_params = [p](const Eigen::VectorXd& z) {
    SarParams params;
    params.rho = std::tanh(z(0));
    params.sigma = std::exp(z(1));
    params.beta = z.tail(p);
    return params;
  };

  LogTarget target = [&](const Eigen::VectorXd& z) {
    const SarParams params = to_params(z);
    if (!(params.rho > -1.0 && params.rho < 1.0) || !(params.sigma > 0.0))
      return -std::numeric_limits<double>::infinity();
    // Kernel density is over (rho, sigma^2, beta): d rho/dz0 = 1 - rho^2, d sigma^2/dz1 = 2 sigma^2.
    const double log_jacobian =
        std::log1p(-params.rho * params.rho) + std::log(2.0) + 2.0 * z(1);
    return log_posterior_kernel(data, params, prior) + log_jacobian;
  };

  Initializer init = [&](std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(dim);
    z(0) = 0.3 * normal(rng);
    z(1) = std::log(sigma_ols) + 0.3 * normal(rng);
    for (Eigen::Index j = 0; j < p; ++j) z(2 + j) = beta_ols(j) + beta_se(j) * normal(rng);
    return z;
  };

  Eigen::VectorXd scales(dim);
  scales(0) = 0.1;
  scales(1) = 0.1;
  scales.tail(p) = beta_se;

  const ChainOutput chains = sample_adaptive_rwm(target, init, scales, options);

  FitResult result;
  PosteriorDraws& draws = result.draws;
  draws.values.resize(chains.draws.rows(), dim);
  for (Eigen::Index s = 0; s < chains.draws.rows(); ++s) {
    draws.values(s, 0) = std::tanh(chains.draws(s, 0));
    draws.values(s, 1) = std::exp(chains.draws(s, 1));
    draws.values.row(s).tail(p) = chains.draws.row(s).tail(p);
  }
  draws.chain_ids = chains.chain_ids;
  draws.n_chains = options.n_chains;
  draws.seed = options.seed;
  result.acceptance = chains.acceptance;
  return result;
}

}  // namespace sarinf
