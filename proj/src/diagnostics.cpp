#include <algorithm>
#include <cmath>
#include <map>

#include "sarinf/error.hpp"
#include "sarinf/sampler.hpp"
#include "sarinf/stats.hpp"

namespace sarinf {

namespace {

using Chains = std::vector<std::vector<double>>;

Chains group_by_chain(std::span<const double> column, std::span<const int> chain_ids) {
  require(column.size() == chain_ids.size(), "chain labels do not match the number of draws");
  require(!column.empty(), "no draws");
  std::map<int, std::vector<double>> grouped;
  for (std::size_t s = 0; s < column.size(); ++s) grouped[chain_ids[s]].push_back(column[s]);
  Chains chains;
  for (auto& [id, values] : grouped) chains.push_back(std::move(values));
  for (const auto& c : chains)
    require(c.size() == chains.front().size(), "chains have unequal draw counts");
  return chains;
}

// Biased autocovariance at `lag`.
double autocovariance(const std::vector<double>& x, double mu, std::size_t lag) {
  double acc = 0.0;
  for (std::size_t t = 0; t + lag < x.size(); ++t) acc += (x[t] - mu) * (x[t + lag] - mu);
  return acc / static_cast<double>(x.size());
}

}  // namespace

double rhat(std::span<const double> column, std::span<const int> chain_ids) {
  const Chains chains = group_by_chain(column, chain_ids);
  const std::size_t n = chains.front().size();
  require(n >= 4, "rhat needs at least 4 draws per chain");
  const std::size_t half = n / 2;

  Chains split;
  for (const auto& c : chains) {
    split.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
    split.emplace_back(c.end() - static_cast<std::ptrdiff_t>(half), c.end());
  }
  std::vector<double> means;
  double within = 0.0;
  for (const auto& c : split) {
    means.push_back(mean(c));
    within += sample_variance(c);
  }
  within /= static_cast<double>(split.size());
  if (within <= 0.0) return 1.0;
  const auto len = static_cast<double>(half);
  const double between = len * sample_variance(means);
  const double var_plus = (len - 1.0) / len * within + between / len;
  return std::sqrt(var_plus / within);
}

double ess(std::span<const double> column, std::span<const int> chain_ids) {
  const Chains chains = group_by_chain(column, chain_ids);
  const std::size_t n = chains.front().size();
  const std::size_t m = chains.size();
  const double total = static_cast<double>(n * m);
  require(n >= 4, "ess needs at least 4 draws per chain");

  std::vector<double> means;
  double within = 0.0;
  for (const auto& c : chains) {
    means.push_back(mean(c));
    within += sample_variance(c);
  }
  within /= static_cast<double>(m);
  if (within <= 0.0) return total;
  const auto nd = static_cast<double>(n);
  double var_plus = within * (nd - 1.0) / nd;
  if (m > 1) var_plus += sample_variance(means);

  auto rho_at = [&](std::size_t lag) {
    double acov = 0.0;
    for (std::size_t c = 0; c < m; ++c) acov += autocovariance(chains[c], means[c], lag);
    acov /= static_cast<double>(m);
    // acov at lag 0 is biased; rescale so lag 0 matches `within`.
    return 1.0 - (within - acov * nd / (nd - 1.0)) / var_plus;
  };

  // Geyer initial positive (monotone) sequence over paired sums.
  double tau = -1.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
    double pair = (lag == 0 ? 1.0 : rho_at(lag)) + rho_at(lag + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    prev_pair = pair;
    tau += 2.0 * pair;
  }
  tau = std::max(tau, 1.0 / std::log10(total));
  return std::min(total / tau, total);
}

std::vector<SummaryRow> summarize(const PosteriorDraws& draws) {
  require(draws.n_draws() > 0, "cannot summarize empty draws");
  const auto names = PosteriorDraws::column_names(draws.n_beta());
  std::vector<SummaryRow> rows;
  for (Eigen::Index j = 0; j < draws.values.cols(); ++j) {
    const Eigen::VectorXd col = draws.values.col(j);
    const std::span<const double> values(col.data(), static_cast<std::size_t>(col.size()));
    SummaryRow row;
    row.parameter = names[static_cast<std::size_t>(j)];
    row.mean = mean(values);
    row.q025 = quantile(values, 0.025);
    row.q50 = quantile(values, 0.5);
    row.q975 = quantile(values, 0.975);
    row.ess = ess(values, draws.chain_ids);
    row.rhat = rhat(values, draws.chain_ids);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sarinf
