#include "sarinf/divergence.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "sarinf/error.hpp"
#include "sarinf/parallel.hpp"
#include "sarinf/stats.hpp"

namespace sarinf {

namespace {

const double kLogMinNormal = std::log(DBL_MIN);
const double kLogMaxDouble = std::log(DBL_MAX);

constexpr const char* kDensityHint =
    " (hyperparameters a or b below 0.01 are a known cause; only the KL measure is immune)";

std::span<const double> span_of(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void finish(DivergenceReport& report) {
  if (report.type == ReportType::SupremeProportion) {
    report.per_obs = supreme_proportion(report.per_draw);
  } else {
    report.per_obs = report.per_draw.colwise().mean().transpose();
  }
}

// Clamps a log density to the normal range; returns true when it underflowed.
bool clamp_log_density(double& lf) {
  if (std::isnan(lf) || lf > kLogMaxDouble)
    throw NumericalError(std::string("non-finite posterior density at a draw") + kDensityHint);
  if (lf < kLogMinNormal) {
    lf = kLogMinNormal;
    return true;
  }
  return false;
}

}  // namespace

double psi(double x, double alpha) {
  require(x > 0.0, "psi is defined for x > 0");
  if (alpha == 2.0) return (x * x - 2.0 * x + 1.0) / 2.0;
  if (alpha == 1.0) return x * std::log(x) - x + 1.0;
  if (alpha == 0.0) return -std::log(x) + x - 1.0;
  // grouped so that x = 1 gives exactly 0
  return ((std::pow(x, alpha) - 1.0) - alpha * (x - 1.0)) / (alpha * alpha - alpha);
}

double psi_prime(double x, double alpha) {
  require(x > 0.0, "psi' is defined for x > 0");
  if (alpha == 2.0) return x - 1.0;
  if (alpha == 1.0) return std::log(x);
  if (alpha == 0.0) return 1.0 - 1.0 / x;
  return alpha * (std::pow(x, alpha - 1.0) - 1.0) / (alpha * alpha - alpha);
}

ReportType report_type_from_code(int code) {
  require(code == 1 || code == 2, "type must be 1 (divergence) or 2 (supreme proportion)");
  return static_cast<ReportType>(code);
}

double log_normalizer(const Eigen::MatrixXd& points, const Eigen::VectorXd& log_kernel,
                      const AuxiliaryDensity& aux) {
  require(points.rows() > 0, "log_normalizer needs draws");
  require(points.rows() == log_kernel.size(), "kernel values do not match the draws");
  Eigen::VectorXd terms(points.rows());
  bool any = false;
  for (Eigen::Index s = 0; s < points.rows(); ++s) {
    if (!std::isfinite(log_kernel(s)))
      throw NumericalError(std::string("non-finite log kernel at draw ") + std::to_string(s + 1) +
                           kDensityHint);
    const double lg = aux.log_density(points.row(s));
    terms(s) = lg - log_kernel(s);
    any = any || std::isfinite(lg);
  }
  if (!any)
    throw NumericalError("auxiliary density assigns zero mass to every posterior draw");
  return -log_mean_exp(span_of(terms));
}

double bregman_term_over_f1(double log_f1, double log_f2, double alpha) {
  const double u = log_f1 - log_f2;
  if (u == 0.0) return 0.0;
  if (alpha == 2.0) {
    const double d = std::expm1(-u);
    return std::exp(log_f1) * d * d / 2.0;
  }
  if (alpha == 1.0) return u + std::expm1(-u);
  if (alpha == 0.0) return std::exp(-log_f1) * (std::expm1(u) - u);
  return std::exp(alpha * log_f2 - log_f1) * (std::expm1(alpha * u) - alpha * std::expm1(u)) /
         (alpha * alpha - alpha);
}

Eigen::VectorXd supreme_proportion(const Eigen::MatrixXd& per_draw) {
  require(per_draw.rows() > 0 && per_draw.cols() > 0, "supreme_proportion needs a non-empty matrix");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(per_draw.cols());
  for (Eigen::Index s = 0; s < per_draw.rows(); ++s) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < per_draw.cols(); ++i)
      if (per_draw(s, i) > per_draw(s, best)) best = i;
    counts(best) += 1.0;
  }
  // k/S is put on a 2^-52 grid (largest remainder, ties to the lower index):
  // every partial sum is then representable, so the total is exactly 1 in
  // any summation order. Each share moves by less than 2.2e-16.
  using u128 = unsigned __int128;
  constexpr std::uint64_t kUnit = std::uint64_t{1} << 52;
  const auto n_draws = static_cast<std::uint64_t>(per_draw.rows());
  const auto n_obs = static_cast<std::size_t>(per_draw.cols());
  std::vector<std::uint64_t> units(n_obs), rem(n_obs);
  std::uint64_t used = 0;
  for (std::size_t i = 0; i < n_obs; ++i) {
    const u128 scaled = static_cast<u128>(counts(static_cast<Eigen::Index>(i))) * kUnit;
    units[i] = static_cast<std::uint64_t>(scaled / n_draws);
    rem[i] = static_cast<std::uint64_t>(scaled % n_draws);
    used += units[i];
  }
  std::vector<std::size_t> order(n_obs);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return rem[x] > rem[y]; });
  for (std::size_t r = 0; used < kUnit; ++r, ++used) ++units[order[r]];
  Eigen::VectorXd p(per_draw.cols());
  for (std::size_t i = 0; i < n_obs; ++i)
    p(static_cast<Eigen::Index>(i)) = std::ldexp(static_cast<double>(units[i]), -52);
  return p;
}

DivergenceReport kl_from_terms(const Eigen::MatrixXd& log_lik_drop, ReportType type) {
  require(log_lik_drop.rows() > 0 && log_lik_drop.cols() > 0, "KL needs a non-empty draw matrix");
  if (!log_lik_drop.allFinite()) throw NumericalError("non-finite likelihood at a posterior draw");
  DivergenceReport report;
  report.measure = "kl";
  report.alpha = 1.0;
  report.type = type;
  report.per_draw.resize(log_lik_drop.rows(), log_lik_drop.cols());
  for (Eigen::Index i = 0; i < log_lik_drop.cols(); ++i) {
    const Eigen::VectorXd neg = -log_lik_drop.col(i);
    const double log_ratio = log_mean_exp(span_of(neg));
    report.per_draw.col(i) = log_lik_drop.col(i).array() + log_ratio;
  }
  finish(report);
  return report;
}

DivergenceReport density_divergence_from_terms(const InfluenceTerms& terms, AuxKind aux_kind,
                                               double alpha, ReportType type, int threads) {
  const Eigen::Index S = terms.log_lik_drop.rows();
  const Eigen::Index n = terms.log_lik_drop.cols();
  require(S >= 2 && n >= 1, "divergence needs at least two draws and one observation");
  require(terms.log_kernel.size() == S && terms.points.rows() == S,
          "influence terms have inconsistent draw counts");
  if (!terms.log_lik_drop.allFinite())
    throw NumericalError(std::string("non-finite likelihood at a posterior draw") + kDensityHint);

  const AuxiliaryDensity aux = AuxiliaryDensity::fit(aux_kind, terms.points, terms.supports);
  DivergenceReport report;
  report.measure = alpha == 0.0 ? "is" : "bregman";
  report.alpha = alpha;
  report.type = type;
  report.log_normalizer = log_normalizer(terms.points, terms.log_kernel, aux);

  Eigen::VectorXd log_f1 = terms.log_kernel.array() - report.log_normalizer;
  bool underflow = false;
  for (Eigen::Index s = 0; s < S; ++s) underflow = clamp_log_density(log_f1(s)) || underflow;

  report.per_draw.resize(S, n);
  std::vector<char> column_underflow(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t col) {
    const auto i = static_cast<Eigen::Index>(col);
    const Eigen::VectorXd neg = -terms.log_lik_drop.col(i);
    // log(c2 / c1) = log E_f1[exp(k2 - k1)].
    const double log_ratio = log_mean_exp(span_of(neg));
    for (Eigen::Index s = 0; s < S; ++s) {
      double log_f2 = log_f1(s) - terms.log_lik_drop(s, i) - log_ratio;
      if (clamp_log_density(log_f2)) column_underflow[col] = 1;
      const double value = bregman_term_over_f1(log_f1(s), log_f2, alpha);
      if (!std::isfinite(value))
        throw NumericalError("non-finite divergence term for observation " +
                             std::to_string(i + 1) + kDensityHint);
      report.per_draw(s, i) = value;
    }
  });
  for (char c : column_underflow) underflow = underflow || c != 0;
  if (underflow) report.flags.emplace_back("density_underflow_clamped");
  finish(report);
  return report;
}

InfluenceTerms sar_influence_terms(const SarDataset& data, const Eigen::VectorXd& yhat,
                                   const PosteriorDraws& draws, const PriorConfig* prior,
                                   int threads) {
  const Eigen::Index n = data.n();
  const Eigen::Index S = draws.n_draws();
  require(yhat.size() == n, "yhat has " + std::to_string(yhat.size()) + " entries, expected " +
                                std::to_string(n));
  require(draws.n_beta() == data.k() + 1,
          "draws carry " + std::to_string(draws.n_beta()) + " coefficients but the model has " +
              std::to_string(data.k() + 1));
  draws.validate();
  if (prior) prior->validate();

  const Eigen::MatrixXd& w = data.weights().entries();
  const Eigen::VectorXd delta = yhat - data.y();
  InfluenceTerms terms;
  terms.log_lik_drop.resize(S, n);
  if (prior) {
    terms.log_kernel.resize(S);
    terms.points.resize(S, draws.values.cols());
  }

  parallel_for(static_cast<std::size_t>(S), threads, [&](std::size_t row) {
    const auto s = static_cast<Eigen::Index>(row);
    const SarParams params = SarParams::from_row(draws.values.row(s));
    const double s2 = params.sigma * params.sigma;
    const Eigen::VectorXd r = data.y() - params.rho * data.lag() - data.design() * params.beta;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (delta(i) == 0.0) {
        terms.log_lik_drop(s, i) = 0.0;
        continue;
      }
      // Replacing y_i shifts the residual by delta_i * (e_i - rho W e_i).
      double cross = 0.0;
      double norm2 = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double a = (j == i ? 1.0 : 0.0) - params.rho * w(j, i);
        cross += r(j) * a;
        norm2 += a * a;
      }
      const double change = 2.0 * delta(i) * cross + delta(i) * delta(i) * norm2;
      terms.log_lik_drop(s, i) = change / (2.0 * s2);
    }
    if (prior) {
      terms.log_kernel(s) = log_posterior_kernel(data, params, *prior);
      terms.points.row(s) = draws.values.row(s);
      terms.points(s, 1) = s2;
    }
  });
  if (prior) {
    terms.supports.push_back(Support::interval(-1.0, 1.0));
    terms.supports.push_back(Support::positive());
    for (Eigen::Index j = 0; j < draws.n_beta(); ++j) terms.supports.push_back(Support::real());
  }
  return terms;
}

DivergenceReport kl_divergence(const SarDataset& data, const Eigen::VectorXd& yhat,
                               const PosteriorDraws& draws, ReportType type, int threads) {
  const InfluenceTerms terms = sar_influence_terms(data, yhat, draws, nullptr, threads);
  return kl_from_terms(terms.log_lik_drop, type);
}

DivergenceReport is_divergence(const SarDataset& data, const Eigen::VectorXd& yhat,
                               const PosteriorDraws& draws, const PriorConfig& prior,
                               AuxKind aux, ReportType type, int threads) {
  const InfluenceTerms terms = sar_influence_terms(data, yhat, draws, &prior, threads);
  return density_divergence_from_terms(terms, aux, 0.0, type, threads);
}

DivergenceReport bregman_divergence(const SarDataset& data, const Eigen::VectorXd& yhat,
                                    const PosteriorDraws& draws, const PriorConfig& prior,
                                    AuxKind aux, double alpha, ReportType type, int threads) {
  require(std::isfinite(alpha), "alpha must be finite");
  require(alpha != 1.0, "alpha = 1 is the Kullback-Leibler case; use kl_divergence");
  require(alpha != 0.0, "alpha = 0 is the Itakura-Saito case; use is_divergence");
  const InfluenceTerms terms = sar_influence_terms(data, yhat, draws, &prior, threads);
  return density_divergence_from_terms(terms, aux, alpha, type, threads);
}

}  // namespace sarinf
