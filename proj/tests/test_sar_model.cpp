#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "sarinf/error.hpp"
#include "sarinf/sar_model.hpp"
#include "sarinf/stats.hpp"

using namespace sarinf;
using doctest::Approx;

namespace {

// Direct transcription of the likelihood display, summing over observations
// with explicit loops; shares no code with the library.
double likelihood_oracle(const SarDataset& d, const SarParams& p) {
  const Eigen::MatrixXd& w = d.weights().entries();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    double mu = p.beta(0);
    for (Eigen::Index j = 0; j < d.k(); ++j) mu += d.covariates()(i, j) * p.beta(j + 1);
    for (Eigen::Index j = 0; j < d.n(); ++j) mu += p.rho * w(i, j) * d.y()(j);
    const double r = d.y()(i) - mu;
    acc += -0.5 * std::log(2.0 * M_PI * p.sigma * p.sigma) - r * r / (2.0 * p.sigma * p.sigma);
  }
  return acc;
}

double prior_oracle(const SarParams& p, const PriorConfig& c) {
  double beta_term = 0.0;
  for (Eigen::Index j = 0; j < p.beta.size(); ++j)
    beta_term += -0.5 * std::log(2.0 * M_PI * c.eta) - p.beta(j) * p.beta(j) / (2.0 * c.eta);
  const double s2 = p.sigma * p.sigma;
  const double ig = c.a * std::log(c.b) - std::lgamma(c.a) - (c.a + 1) * std::log(s2) - c.b / s2;
  return std::log(0.5) + beta_term + ig;
}

PosteriorDraws draws_from(const std::vector<SarParams>& ps) {
  PosteriorDraws d;
  const auto k = ps.front().beta.size();
  d.values.resize(static_cast<Eigen::Index>(ps.size()), k + 2);
  for (std::size_t s = 0; s < ps.size(); ++s) {
    const auto r = static_cast<Eigen::Index>(s);
    d.values(r, 0) = ps[s].rho;
    d.values(r, 1) = ps[s].sigma;
    d.values.row(r).tail(k) = ps[s].beta.transpose();
  }
  d.chain_ids.assign(ps.size(), 1);
  d.n_chains = 1;
  return d;
}

}  // namespace

TEST_CASE("quantile uses linear interpolation of order statistics") {
  const std::vector<double> v{4, 1, 3, 2};
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 4.0);
  CHECK(quantile(v, 0.5) == Approx(2.5));
  CHECK(quantile(v, 0.99) == Approx(3.97));
  CHECK(median(v) == Approx(2.5));
  CHECK(mean(v) == Approx(2.5));
  CHECK(sample_variance(v) == Approx(5.0 / 3.0));
  const std::vector<double> big{1000.0, 1000.0};
  CHECK(log_sum_exp(big) == Approx(1000.0 + std::log(2.0)));
  CHECK(log_mean_exp(big) == Approx(1000.0));
}

TEST_CASE("simulate with rho = 0 and beta = 0 returns the noise") {
  const auto d = fixtures::random_dataset(20, 1, 3);
  SarParams p{0.0, 1.0, Eigen::VectorXd::Zero(2)};
  const Eigen::VectorXd y = sar_simulate(d.weights(), d.covariates(), p, 42);
  CHECK(y == simulation_noise(20, 1.0, 42));
}

TEST_CASE("simulate with rho = 0 is a regression draw") {
  const auto d = fixtures::random_dataset(20, 2, 4);
  SarParams p{0.0, 1.5, Eigen::Vector3d(0.5, -1.0, 2.0)};
  const Eigen::VectorXd eps = simulation_noise(20, 1.5, 11);
  const Eigen::VectorXd y = sar_simulate(d.weights(), d.covariates(), p, 11);
  CHECK((y - (d.design() * p.beta + eps)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("simulate inverts the defining equation on captured noise") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto d = fixtures::random_dataset(40, 2, seed);
    const auto p = fixtures::random_params(2, seed + 100);
    const Eigen::VectorXd eps = simulation_noise(40, p.sigma, seed);
    const Eigen::VectorXd y = sar_simulate(d.weights(), d.covariates(), p, seed);
    const Eigen::VectorXd back = y - p.rho * d.weights().entries() * y - d.design() * p.beta;
    CHECK((back - eps).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("simulate rejects a singular system") {
  const auto d = fixtures::random_dataset(10, 0, 5);
  SarParams p{0.0, 1.0, Eigen::VectorXd::Zero(1)};
  p.rho = 1.0;
  CHECK_THROWS_AS(sar_simulate_with_noise(d.weights(), d.covariates(), p, Eigen::VectorXd::Zero(10)),
                  InvalidArgument);
  CHECK_THROWS_AS(SpatialFilter(d.weights(), 1.0), NumericalError);
  CHECK_THROWS_AS(SpatialFilter(d.weights(), 0.999999, 1e-6), NumericalError);
  CHECK_NOTHROW(SpatialFilter(d.weights(), 0.999999));
}

TEST_CASE("contaminate examples") {
  const Eigen::Vector3d y(1, 2, 3);
  const std::vector<double> yv{1, 2, 3};
  const Eigen::VectorXd z = contaminate(y, 2);
  CHECK(z(0) == 1.0);
  CHECK(z(2) == 3.0);
  CHECK(z(1) == Approx(2.0 + quantile(yv, 0.99)));
  CHECK(z(1) == Approx(2.0 + 2.98));

  const Eigen::Vector3d y2(-1, 2, 3);
  const Eigen::VectorXd z2 = contaminate(y2, 2);
  CHECK(z2(1) == Approx(2.0 + (-1.0 + 0.02 * 3.0)));
  CHECK(z2(0) == -1.0);

  const Eigen::VectorXd c = Eigen::VectorXd::Constant(5, 1.7);
  CHECK(contaminate(c, 4)(3) == Approx(3.4));
  CHECK_THROWS_AS(contaminate(y, 0), InvalidArgument);
  CHECK_THROWS_AS(contaminate(y, 4), InvalidArgument);
}

TEST_CASE("log_likelihood examples") {
  const auto w = WeightMatrix::from_dense((Eigen::Matrix2d() << 0, 1, 1, 0).finished());
  for (double rho : {-0.5, 0.0, 0.7}) {
    SarDataset d(Eigen::Vector2d::Zero(), Eigen::MatrixXd(2, 0), w);
    SarParams p{rho, 1.0, Eigen::VectorXd::Zero(1)};
    CHECK(log_likelihood(d, p) == Approx(-std::log(2 * M_PI)).epsilon(1e-14));
  }
  // Known residual with sigma = 2: y = (1, -2), rho = 0, beta = 0.
  SarDataset d(Eigen::Vector2d(1, -2), Eigen::MatrixXd(2, 0), w);
  SarParams p{0.0, 2.0, Eigen::VectorXd::Zero(1)};
  CHECK(log_likelihood(d, p) == Approx(-std::log(8 * M_PI) - 5.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("log_likelihood matches the dense-formula oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto d = fixtures::random_dataset(30, 2, seed);
    const auto p = fixtures::random_params(2, seed * 3);
    CHECK(std::abs(log_likelihood(d, p) - likelihood_oracle(d, p)) <= 1e-10);
  }
}

TEST_CASE("pointwise terms") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto d = fixtures::random_dataset(25, 1, seed);
    auto p = fixtures::random_params(1, seed + 7);
    const Eigen::VectorXd pw = pointwise_log_likelihood(d, p);
    CHECK(std::abs(pw.sum() - log_likelihood(d, p)) <= 1e-12 * std::max(1.0, std::abs(pw.sum())));
    // Scalar normal log-pdf per observation.
    const Eigen::VectorXd lag = d.weights().entries() * d.y();
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      const double mu = p.rho * lag(i) + p.beta(0) + p.beta(1) * d.covariates()(i, 0);
      const double z = (d.y()(i) - mu) / p.sigma;
      const double oracle = -std::log(p.sigma) - 0.5 * std::log(2 * M_PI) - 0.5 * z * z;
      CHECK(std::abs(pw(i) - oracle) <= 1e-12);
    }
    p.rho = 0.0;
    const Eigen::VectorXd pw0 = pointwise_log_likelihood(d, p);
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      const double mu = p.beta(0) + p.beta(1) * d.covariates()(i, 0);
      const double z = (d.y()(i) - mu) / p.sigma;
      CHECK(std::abs(pw0(i) - (-std::log(p.sigma) - 0.5 * std::log(2 * M_PI) - 0.5 * z * z)) <= 1e-12);
    }
  }
}

TEST_CASE("log_prior") {
  PriorConfig c;
  SarParams p{0.0, 1.0, Eigen::VectorXd::Zero(2)};
  p.sigma = std::sqrt(c.b / (c.a + 1.0));
  const double s2 = c.b / (c.a + 1.0);
  const double closed = -std::log(2.0) - std::log(2 * M_PI * c.eta) + c.a * std::log(c.b) -
                        std::lgamma(c.a) - (c.a + 1.0) * std::log(s2) - (c.a + 1.0);
  CHECK(log_prior(p, c) == Approx(closed).epsilon(1e-13));

  p.rho = 1.0;
  CHECK(log_prior(p, c) == -std::numeric_limits<double>::infinity());
  p.rho = -1.5;
  CHECK(log_prior(p, c) == -std::numeric_limits<double>::infinity());

  // Doubling eta halves the quadratic term.
  p.rho = 0.2;
  p.beta = Eigen::Vector2d(30.0, -40.0);
  PriorConfig c2 = c;
  c2.eta = 2 * c.eta;
  const double quad1 = log_prior(p, c) - log_prior(SarParams{0.2, p.sigma, Eigen::Vector2d::Zero()}, c);
  const double quad2 = log_prior(p, c2) - log_prior(SarParams{0.2, p.sigma, Eigen::Vector2d::Zero()}, c2);
  CHECK(quad2 == Approx(quad1 / 2.0).epsilon(1e-12));

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto q = fixtures::random_params(3, seed);
    PriorConfig r{0.5 + 0.1 * static_cast<double>(seed), 2.0, 7.0};
    CHECK(std::abs(log_prior(q, r) - prior_oracle(q, r)) <= 1e-10);
  }
}

TEST_CASE("log_posterior_kernel") {
  PriorConfig c;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto d = fixtures::random_dataset(20, 2, seed);
    const auto p = fixtures::random_params(2, seed + 50);
    const double k = log_posterior_kernel(d, p, c);
    CHECK(std::abs(k - (log_likelihood(d, p) + log_prior(p, c))) <= 1e-12 * std::abs(k));
    CHECK(std::abs(k - (likelihood_oracle(d, p) + prior_oracle(p, c))) <= 1e-10);
  }
  // Larger residual lowers the kernel.
  const auto d = fixtures::random_dataset(20, 0, 9);
  SarParams p{0.3, 1.0, Eigen::VectorXd::Constant(1, 0.0)};
  double prev = log_posterior_kernel(d, p, c);
  for (double b0 : {5.0, 10.0, 20.0}) {
    p.beta(0) = b0;  // y is standard normal, so the residual grows with b0
    const double next = log_posterior_kernel(d, p, c);
    CHECK(next < prev);
    prev = next;
  }
}

TEST_CASE("fitted_values") {
  const auto d = fixtures::random_dataset(30, 2, 5);
  SarParams p{0.0, 1.0, Eigen::Vector3d(1, 2, -1)};
  CHECK((fitted_values(d, p) - d.design() * p.beta).cwiseAbs().maxCoeff() <= 1e-14);
  p.rho = 0.6;
  p.beta.setZero();
  CHECK(fitted_values(d, p).isZero(0.0));

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto q = fixtures::random_params(2, seed);
    const Eigen::VectorXd f = fitted_values(d, q);
    const Eigen::VectorXd resid = f - q.rho * d.weights().entries() * f - d.design() * q.beta;
    CHECK(resid.norm() < 1e-10);
    // Linear in beta.
    auto q2 = fixtures::random_params(2, seed + 1000);
    q2.rho = q.rho;
    SarParams sum{q.rho, 1.0, q.beta + q2.beta};
    CHECK((fitted_values(d, sum) - f - fitted_values(d, q2)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("impute_yhat") {
  const auto d = fixtures::random_dataset(15, 1, 8);
  const auto p = fixtures::random_params(1, 3);
  for (auto basis : {ImputationBasis::Conditional, ImputationBasis::ReducedForm}) {
    const Eigen::VectorXd at = basis == ImputationBasis::Conditional ? conditional_mean(d, p)
                                                                     : fitted_values(d, p);
    const auto same = draws_from({p, p, p});
    CHECK((impute_yhat(d, same, ImputationMethod::Mean, basis) - at).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((impute_yhat(d, same, ImputationMethod::Median, basis) - at).cwiseAbs().maxCoeff() <= 1e-12);

    const auto p2 = fixtures::random_params(1, 4);
    const Eigen::VectorXd at2 = basis == ImputationBasis::Conditional ? conditional_mean(d, p2)
                                                                      : fitted_values(d, p2);
    const auto two = draws_from({p, p2});
    CHECK((impute_yhat(d, two, ImputationMethod::Mean, basis) - (at + at2) / 2).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // Recompute-and-aggregate oracle over many draws, both methods.
  std::vector<SarParams> ps;
  for (std::uint64_t s = 0; s < 41; ++s) ps.push_back(fixtures::random_params(1, 100 + s));
  const auto many = draws_from(ps);
  for (auto basis : {ImputationBasis::Conditional, ImputationBasis::ReducedForm}) {
    const Eigen::VectorXd got_mean = impute_yhat(d, many, ImputationMethod::Mean, basis, 4);
    const Eigen::VectorXd got_median = impute_yhat(d, many, ImputationMethod::Median, basis, 1);
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      std::vector<double> vals;
      for (const auto& q : ps) {
        Eigen::VectorXd f;
        if (basis == ImputationBasis::Conditional) {
          f = q.rho * d.weights().entries() * d.y() + d.design() * q.beta;
        } else {
          Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(d.n(), d.n()) - q.rho * d.weights().entries();
          f = sys.fullPivLu().solve(d.design() * q.beta);
        }
        vals.push_back(f(i));
      }
      double acc = 0.0;
      for (double v : vals) acc += v;
      std::sort(vals.begin(), vals.end());
      CHECK(std::abs(got_mean(i) - acc / 41.0) <= 1e-12 * std::max(1.0, std::abs(got_mean(i))));
      CHECK(std::abs(got_median(i) - vals[20]) <= 1e-12 * std::max(1.0, std::abs(vals[20])));
    }
  }
}

TEST_CASE("dataset validation") {
  const auto d = fixtures::random_dataset(10, 1, 1);
  CHECK_THROWS_AS(SarDataset(Eigen::VectorXd::Zero(9), d.covariates().topRows(9), d.weights()),
                  InvalidArgument);
  Eigen::VectorXd y = d.y();
  y(3) = std::nan("");
  CHECK_THROWS_AS(SarDataset(y, d.covariates(), d.weights()), InvalidArgument);
  SarParams bad{0.0, -1.0, Eigen::VectorXd::Zero(2)};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  PriorConfig c{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}
