#include "sarinf/aux_density.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

#include "sarinf/error.hpp"

namespace sarinf {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool uses_positive_coordinates(AuxKind kind) {
  return kind == AuxKind::Exponential || kind == AuxKind::Gamma;
}

}  // namespace

bool Support::contains(double x) const {
  switch (kind) {
    case Kind::Real: return std::isfinite(x);
    case Kind::Positive: return x > 0.0 && std::isfinite(x);
    case Kind::Interval: return x > lo && x < hi;
  }
  return false;
}

AuxKind aux_kind_from_code(int code) {
  require(code >= 1 && code <= 4,
          "dist must be 1 (Exponential), 2 (Gamma), 3 (Normal) or 4 (Multivariate Normal)");
  return static_cast<AuxKind>(code);
}

std::string to_string(AuxKind kind) {
  switch (kind) {
    case AuxKind::Exponential: return "exponential";
    case AuxKind::Gamma: return "gamma";
    case AuxKind::Normal: return "normal";
    case AuxKind::MultivariateNormal: return "multivariate_normal";
  }
  return "unknown";
}

bool AuxiliaryDensity::to_working(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                                  Eigen::VectorXd& work, double& log_jacobian) const {
  const Eigen::Index d = dim();
  work.resize(d);
  log_jacobian = 0.0;
  const bool positive = uses_positive_coordinates(kind_);
  for (Eigen::Index j = 0; j < d; ++j) {
    const Support& sup = supports_[static_cast<std::size_t>(j)];
    const double v = x(j);
    if (!sup.contains(v)) return false;
    switch (sup.kind) {
      case Support::Kind::Real:
        if (positive) {
          const double z = (v - shift_(j)) / scale_(j);
          work(j) = std::exp(z);
          log_jacobian += z - std::log(scale_(j));
        } else {
          work(j) = v;
        }
        break;
      case Support::Kind::Positive:
        if (positive) {
          work(j) = v;
        } else {
          work(j) = std::log(v);
          log_jacobian -= std::log(v);
        }
        break;
      case Support::Kind::Interval: {
        const double below = v - sup.lo;
        const double above = sup.hi - v;
        if (positive) {
          work(j) = below / above;
          log_jacobian += std::log(sup.hi - sup.lo) - 2.0 * std::log(above);
        } else {
          work(j) = std::log(below) - std::log(above);
          log_jacobian += std::log(sup.hi - sup.lo) - std::log(below) - std::log(above);
        }
        break;
      }
    }
    if (!std::isfinite(work(j)) || (positive && !(work(j) > 0.0))) return false;
  }
  return true;
}

AuxiliaryDensity AuxiliaryDensity::fit(AuxKind kind, const Eigen::MatrixXd& points,
                                       std::vector<Support> supports) {
  require(points.rows() >= 2, "auxiliary density needs at least two draws");
  require(points.cols() == static_cast<Eigen::Index>(supports.size()),
          "auxiliary density: one support per coordinate required");
  AuxiliaryDensity aux;
  aux.kind_ = kind;
  aux.supports_ = std::move(supports);
  const Eigen::Index d = points.cols();
  const Eigen::Index S = points.rows();

  aux.shift_ = points.colwise().mean().transpose();
  aux.scale_.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var = (points.col(j).array() - aux.shift_(j)).square().sum() / static_cast<double>(S - 1);
    aux.scale_(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }

  Eigen::MatrixXd work(S, d);
  Eigen::VectorXd row;
  double unused = 0.0;
  for (Eigen::Index s = 0; s < S; ++s) {
    if (!aux.to_working(points.row(s), row, unused))
      throw InvalidArgument("draw " + std::to_string(s + 1) +
                            " lies outside the auxiliary density support");
    work.row(s) = row.transpose();
  }

  const Eigen::VectorXd mu = work.colwise().mean().transpose();
  const Eigen::MatrixXd centered = work.rowwise() - mu.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(S - 1);
  aux.first_.resize(d);
  aux.second_.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var = cov(j, j);
    if (!(var > 0.0))
      throw NumericalError("auxiliary density: coordinate " + std::to_string(j + 1) +
                           " has zero variance across draws");
    switch (kind) {
      case AuxKind::Normal:
      case AuxKind::MultivariateNormal:
        aux.first_(j) = mu(j);
        aux.second_(j) = std::sqrt(var);
        break;
      case AuxKind::Gamma:
        aux.first_(j) = mu(j) * mu(j) / var;
        aux.second_(j) = mu(j) / var;
        break;
      case AuxKind::Exponential:
        aux.first_(j) = 1.0 / mu(j);
        aux.second_(j) = 0.0;
        break;
    }
  }
  if (kind == AuxKind::MultivariateNormal) {
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
      throw NumericalError("auxiliary density: draw covariance is not positive definite");
    aux.mvn_mean_ = mu;
    aux.mvn_chol_ = llt.matrixL();
    aux.mvn_log_det_ = 2.0 * aux.mvn_chol_.diagonal().array().log().sum();
  }
  return aux;
}

double AuxiliaryDensity::log_density(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  require(x.size() == dim(), "auxiliary density: point has the wrong dimension");
  Eigen::VectorXd work;
  double log_jacobian = 0.0;
  if (!to_working(x, work, log_jacobian)) return kNegInf;
  const Eigen::Index d = dim();
  double lp = 0.0;
  switch (kind_) {
    case AuxKind::Normal:
      for (Eigen::Index j = 0; j < d; ++j) {
        const double z = (work(j) - first_(j)) / second_(j);
        lp += -0.5 * kLogTwoPi - std::log(second_(j)) - 0.5 * z * z;
      }
      break;
    case AuxKind::MultivariateNormal: {
      const Eigen::VectorXd z =
          mvn_chol_.triangularView<Eigen::Lower>().solve(work - mvn_mean_);
      lp = -0.5 * static_cast<double>(d) * kLogTwoPi - 0.5 * mvn_log_det_ - 0.5 * z.squaredNorm();
      break;
    }
    case AuxKind::Gamma:
      for (Eigen::Index j = 0; j < d; ++j) {
        const double shape = first_(j), rate = second_(j);
        lp += shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(work(j)) -
              rate * work(j);
      }
      break;
    case AuxKind::Exponential:
      for (Eigen::Index j = 0; j < d; ++j) lp += std::log(first_(j)) - first_(j) * work(j);
      break;
  }
  return lp + log_jacobian;
}

}  // namespace sarinf
