#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sarinf/aux_density.hpp"
#include "sarinf/draws.hpp"
#include "sarinf/sar_model.hpp"

namespace sarinf {

/// Convex generator psi_alpha with dedicated branches at alpha = 2, 1, 0.
double psi(double x, double alpha);
double psi_prime(double x, double alpha);

/// Raw per-observation divergences (type 1) or supreme proportions (type 2).
enum class ReportType { Raw = 1, SupremeProportion = 2 };

ReportType report_type_from_code(int code);

struct DivergenceReport {
  std::string measure;        // "kl", "is" or "bregman"
  double alpha = 0.0;
  ReportType type = ReportType::Raw;
  Eigen::VectorXd per_obs;    // D_i or P_i
  Eigen::MatrixXd per_draw;   // S x n per-draw terms
  double log_normalizer = 0.0;  // log c of the full-data posterior (density-based measures)
  std::vector<std::string> flags;
};

/// log c for c = integral of exp(log_kernel), from the reciprocal importance
/// identity 1/c = E_post[g / exp(log_kernel)] over posterior draws.
/// `log_kernel` holds the kernel evaluated at each row of `points`.
double log_normalizer(const Eigen::MatrixXd& points, const Eigen::VectorXd& log_kernel,
                      const AuxiliaryDensity& aux);

/// Per-draw Bregman integrand divided by f1, from log f1 and log f2. Uses
/// closed forms of psi(f1) - psi(f2) - (f1 - f2) psi'(f2) in the log ratio.
double bregman_term_over_f1(double log_f1, double log_f2, double alpha);

/// P_i: share of rows whose maximum sits in column i (lowest index wins ties).
Eigen::VectorXd supreme_proportion(const Eigen::MatrixXd& per_draw);

/// Model-agnostic inputs, all evaluated at S draws of the full-data posterior.
struct InfluenceTerms {
  /// S x n: log L(y | theta^s) - log L(y_(i) | theta^s).
  Eigen::MatrixXd log_lik_drop;
  /// S: full-data log posterior kernel.
  Eigen::VectorXd log_kernel;
  /// S x d: draws in the density coordinates of the kernel.
  Eigen::MatrixXd points;
  std::vector<Support> supports;
};

/// KL case: per-draw log(f1/f2) with the normalizer ratio estimated from the
/// same draws. Priors cancel, so only log_lik_drop is used.
DivergenceReport kl_from_terms(const Eigen::MatrixXd& log_lik_drop, ReportType type);

/// Density-based case for any alpha (alpha = 0 is Itakura-Saito).
DivergenceReport density_divergence_from_terms(const InfluenceTerms& terms, AuxKind aux,
                                               double alpha, ReportType type, int threads = 1);

/// Builds InfluenceTerms for the SAR model, where y_(i) is y with y_i
/// replaced by yhat_i. Kernel density coordinates are (rho, sigma^2, beta).
InfluenceTerms sar_influence_terms(const SarDataset& data, const Eigen::VectorXd& yhat,
                                   const PosteriorDraws& draws, const PriorConfig* prior,
                                   int threads = 1);

DivergenceReport kl_divergence(const SarDataset& data, const Eigen::VectorXd& yhat,
                               const PosteriorDraws& draws, ReportType type, int threads = 1);

DivergenceReport is_divergence(const SarDataset& data, const Eigen::VectorXd& yhat,
                               const PosteriorDraws& draws, const PriorConfig& prior,
                               AuxKind aux, ReportType type, int threads = 1);

/// General alpha; 0 and 1 are rejected in favour of is_divergence / kl_divergence.
DivergenceReport bregman_divergence(const SarDataset& data, const Eigen::VectorXd& yhat,
                                    const PosteriorDraws& draws, const PriorConfig& prior,
                                    AuxKind aux, double alpha, ReportType type,
                                    int threads = 1);

}  // namespace sarinf
