#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace sarinf {

/// Support of one density coordinate.
struct Support {
  enum class Kind { Real, Positive, Interval };
  Kind kind = Kind::Real;
  double lo = 0.0;
  double hi = 0.0;

  static Support real() { return {Kind::Real, 0.0, 0.0}; }
  static Support positive() { return {Kind::Positive, 0.0, 0.0}; }
  static Support interval(double lo, double hi) { return {Kind::Interval, lo, hi}; }

  bool contains(double x) const;
};

enum class AuxKind { Exponential = 1, Gamma = 2, Normal = 3, MultivariateNormal = 4 };

AuxKind aux_kind_from_code(int code);
std::string to_string(AuxKind kind);

/// Importance density on a parameter space, fitted to draws by moment matching.
///
/// Normal and MultivariateNormal live on unconstrained coordinates (log for
/// positive, logit for interval coordinates). Exponential and Gamma are
/// products over positive coordinates: positive parameters as-is, interval
/// parameters through (x - lo)/(hi - x), real parameters through
/// exp((x - m)/s) with m, s the draw mean and standard deviation. Densities
/// are reported with respect to Lebesgue measure on the original coordinates,
/// Jacobians included, and vanish exactly outside the support.
class AuxiliaryDensity {
 public:
  static AuxiliaryDensity fit(AuxKind kind, const Eigen::MatrixXd& points,
                              std::vector<Support> supports);

  AuxKind kind() const { return kind_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(supports_.size()); }

  /// log g(x); -inf outside the support.
  double log_density(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

 private:
  AuxKind kind_ = AuxKind::Normal;
  std::vector<Support> supports_;
  // Standardization for real coordinates under Gamma/Exponential.
  Eigen::VectorXd shift_, scale_;
  // Per-coordinate parameters: (mean, sd) for Normal, (shape, rate) for Gamma,
  // (rate, unused) for Exponential.
  Eigen::VectorXd first_, second_;
  // MultivariateNormal.
  Eigen::VectorXd mvn_mean_;
  Eigen::MatrixXd mvn_chol_;
  double mvn_log_det_ = 0.0;

  // Maps x to working coordinates, accumulating log |d work / d x|.
  bool to_working(const Eigen::Ref<const Eigen::RowVectorXd>& x, Eigen::VectorXd& work,
                  double& log_jacobian) const;
};

}  // namespace sarinf
