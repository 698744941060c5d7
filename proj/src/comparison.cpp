#include "sarinf/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "sarinf/error.hpp"
#include "sarinf/stats.hpp"
#include "sarinf/svg.hpp"

namespace sarinf {

namespace {

void check_loglik(const Eigen::MatrixXd& ll) {
  require(ll.rows() >= 2, "log-likelihood matrix needs at least 2 draws (rows)");
  require(ll.cols() >= 1, "log-likelihood matrix needs at least one observation");
  require(ll.allFinite(), "log-likelihood matrix contains non-finite entries");
}

std::span<const double> column_span(const Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

double scaled_se(const std::vector<double>& contributions) {
  return std::sqrt(static_cast<double>(contributions.size()) * sample_variance(contributions));
}

}  // namespace

WaicResult waic(const Eigen::MatrixXd& ll) {
  check_loglik(ll);
  WaicResult out;
  std::vector<double> contributions;
  for (Eigen::Index i = 0; i < ll.cols(); ++i) {
    const auto col = column_span(ll, i);
    const double lppd_i = log_mean_exp(col);
    const double var_i = sample_variance(col);
    out.lppd += lppd_i;
    out.p_waic += var_i;
    contributions.push_back(-2.0 * (lppd_i - var_i));
  }
  out.waic = -2.0 * out.lppd + 2.0 * out.p_waic;
  out.waic_se = scaled_se(contributions);
  return out;
}

Eigen::VectorXd loo_log_weights(const Eigen::MatrixXd& ll, Eigen::Index i) {
  const Eigen::Index S = ll.rows();
  Eigen::VectorXd lw = -ll.col(i);
  const std::span<const double> raw(lw.data(), static_cast<std::size_t>(S));
  const double cap = log_mean_exp(raw) + 0.75 * std::log(static_cast<double>(S));
  const Eigen::VectorXd capped = lw.cwiseMin(cap);
  const double total =
      log_sum_exp(std::span<const double>(capped.data(), static_cast<std::size_t>(S)));
  if (!std::isfinite(total))
    throw NumericalError("all importance weights vanish for observation " + std::to_string(i + 1));
  return capped.array() - total;
}

LooResult loo_cv(const Eigen::MatrixXd& ll) {
  check_loglik(ll);
  const Eigen::Index S = ll.rows();
  const Eigen::Index n = ll.cols();
  LooResult out;
  std::vector<double> contributions;
  std::vector<double> buffer(static_cast<std::size_t>(S));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd lw = loo_log_weights(ll, i);
    auto weighted_lpd = [&](Eigen::Index j) {
      for (Eigen::Index s = 0; s < S; ++s) buffer[static_cast<std::size_t>(s)] = lw(s) + ll(s, j);
      return log_sum_exp(buffer);
    };
    const double own = weighted_lpd(i);
    contributions.push_back(-2.0 * own);
    out.term_one += -2.0 * own;
    double cross = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) cross += (j == i) ? own : weighted_lpd(j);
    out.term_two += 2.0 / static_cast<double>(n) * cross;
  }
  out.loo = out.term_one + out.term_two;
  out.loo_se = scaled_se(contributions);
  return out;
}

ComparisonEntry make_entry(std::string label, const Eigen::MatrixXd& ll) {
  const WaicResult w = waic(ll);
  const LooResult l = loo_cv(ll);
  return {std::move(label), w.waic, w.waic_se, w.p_waic, l.loo, l.loo_se, l.term_one};
}

ComparisonReport compare(std::vector<ComparisonEntry> entries) {
  require(entries.size() >= 2, "model comparison needs at least two models");
  ComparisonReport report;
  report.table = entries;
  std::stable_sort(report.table.begin(), report.table.end(),
                   [](const ComparisonEntry& a, const ComparisonEntry& b) { return a.loo < b.loo; });

  report.csv = "model,criterion,estimate,se\n";
  svg::Series waic_series{"WAIC", {}};
  svg::Series loo_series{"LOO", {}};
  svg::PlotSpec spec{"Model comparison", "model", "criterion (+/- 1 SE)", {}};
  for (std::size_t m = 0; m < entries.size(); ++m) {
    const auto& e = entries[m];
    report.csv += fmt::format("{},WAIC,{:.17g},{:.17g}\n", e.label, e.waic, e.waic_se);
    report.csv += fmt::format("{},LOO,{:.17g},{:.17g}\n", e.label, e.loo, e.loo_se);
    const double x = static_cast<double>(m + 1);
    waic_series.points.push_back({x - 0.1, e.waic, e.waic_se});
    loo_series.points.push_back({x + 0.1, e.loo, e.loo_se});
    spec.x_categories.push_back(e.label);
  }
  report.svg = svg::scatter(spec, {waic_series, loo_series});
  return report;
}

}  // namespace sarinf
