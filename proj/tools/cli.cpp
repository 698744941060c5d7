#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <filesystem>
#include <optional>
#include <set>
#include <type_traits>

#include "sarinf/comparison.hpp"
#include "sarinf/divergence.hpp"
#include "sarinf/error.hpp"
#include "sarinf/graph.hpp"
#include "sarinf/io.hpp"
#include "sarinf/sampler.hpp"
#include "sarinf/sar_model.hpp"
#include "sarinf/svg.hpp"
#include "sarinf/workload.hpp"

#ifndef SARINF_VERSION
#define SARINF_VERSION "unknown"
#endif

namespace sarinf::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Simulation refuses systems this close to singular: the reduced form would
// amplify the noise by more than ~1e6 and the draw is useless as test data.
constexpr double kSimulationMinRcond = 1e-6;

/// JSON object with typed accessors. Every key read is copied, with defaults
/// filled in, into resolved(); done() rejects keys nobody asked for.
class Config {
 public:
  Config(json raw, fs::path base, std::string where)
      : raw_(std::move(raw)), base_(std::move(base)), where_(std::move(where)) {
    resolved_ = json::object();
  }

  static Config load(const fs::path& path) {
    const std::string text = io::read_text(path);
    json raw;
    try {
      raw = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InvalidArgument(path.string() + ": " + e.what());
    }
    require(raw.is_object(), path.string() + ": top level must be a JSON object");
    return Config(std::move(raw), path.parent_path(), path.string());
  }

  bool has(const std::string& key) const { return raw_.contains(key); }
  const std::string& where() const { return where_; }
  const json& resolved() const { return resolved_; }

  template <typename T>
  T value(const std::string& key) {
    require(has(key), where_ + ": missing required key '" + key + "'");
    const json& node = raw_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      require(node.is_boolean(), where_ + ": '" + key + "' must be true or false");
    } else if constexpr (std::is_integral_v<T>) {
      require(node.is_number_integer(), where_ + ": '" + key + "' must be an integer");
      if constexpr (std::is_unsigned_v<T>)
        require(node.is_number_unsigned(), where_ + ": '" + key + "' must be non-negative");
    } else if constexpr (std::is_floating_point_v<T>) {
      require(node.is_number(), where_ + ": '" + key + "' must be a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      require(node.is_string(), where_ + ": '" + key + "' must be a string");
    }
    T out;
    try {
      out = node.get<T>();
    } catch (const json::exception& e) {
      throw InvalidArgument(where_ + ": '" + key + "': " + e.what());
    }
    resolved_[key] = node;
    return out;
  }

  template <typename T>
  T value(const std::string& key, T fallback) {
    if (has(key)) return value<T>(key);
    resolved_[key] = fallback;
    return fallback;
  }

  /// File path relative to the config file; must exist.
  fs::path path(const std::string& key) {
    const auto given = value<std::string>(key);
    fs::path p(given);
    if (p.is_relative()) p = base_ / p;
    require(fs::is_regular_file(p), where_ + ": '" + key + "': file not found: " + p.string());
    return p;
  }

  Config child(const std::string& key) const {
    require(raw_.at(key).is_object(), where_ + ": '" + key + "' must be an object");
    return Config(raw_.at(key), base_, where_ + "." + key);
  }

  std::vector<Config> children(const std::string& key) const {
    require(has(key) && raw_.at(key).is_array(), where_ + ": '" + key + "' must be an array");
    std::vector<Config> out;
    std::size_t k = 0;
    for (const auto& item : raw_.at(key)) {
      const std::string at = where_ + "." + key + "[" + std::to_string(k++) + "]";
      require(item.is_object(), at + " must be an object");
      out.emplace_back(item, base_, at);
    }
    return out;
  }

  void adopt(const std::string& key, const Config& c) {
    c.done();
    resolved_[key] = c.resolved_;
  }

  void adopt(const std::string& key, const std::vector<Config>& cs) {
    json arr = json::array();
    for (const auto& c : cs) {
      c.done();
      arr.push_back(c.resolved_);
    }
    resolved_[key] = std::move(arr);
  }

  void set(const std::string& key, json v) { resolved_[key] = std::move(v); }

  void done() const {
    for (const auto& item : raw_.items())
      require(resolved_.contains(item.key()), where_ + ": unknown key '" + item.key() + "'");
  }

 private:
  json raw_;
  json resolved_;
  fs::path base_;
  std::string where_;
};

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  std::string out;
};

/// The --seed flag is the single source of randomness. A "seed" key in the
/// config is allowed only as a record and must agree with the flag.
std::uint64_t resolve_seed(Config& cfg, const Common& common) {
  if (cfg.has("seed")) {
    const auto recorded = cfg.value<std::uint64_t>("seed");
    require(common.seed_given, "--seed is required (the config seed is only a record)");
    require(recorded == common.seed,
            fmt::format("{}: seed {} differs from --seed {}", cfg.where(), recorded, common.seed));
  }
  require(common.seed_given, "--seed is required for this command");
  return common.seed;
}

std::optional<std::uint64_t> optional_seed(Config& cfg, const Common& common) {
  if (cfg.has("seed") || common.seed_given) return resolve_seed(cfg, common);
  return std::nullopt;
}

json provenance(const std::string& command, const Config& cfg,
                std::optional<std::uint64_t> seed) {
  json j;
  j["tool"] = "sarinf";
  j["version"] = SARINF_VERSION;
  j["command"] = command;
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["config"] = cfg.resolved();
  return j;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <typename F>
auto with_context(const fs::path& file, F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(file.string() + ": " + e.what());
  }
}

WeightMatrix load_weights(const fs::path& file) {
  return with_context(file, [&] { return WeightMatrix::from_dense(io::read_matrix_csv(file)); });
}

AdjacencyMatrix load_adjacency(const fs::path& file) {
  return with_context(file,
                      [&] { return AdjacencyMatrix::from_dense(io::read_matrix_csv(file)); });
}

/// Weights from "W" or, failing that, row-standardized "A".
std::optional<WeightMatrix> weights_from_config(Config& cfg) {
  require(!(cfg.has("W") && cfg.has("A")), cfg.where() + ": give either 'W' or 'A', not both");
  if (cfg.has("W")) return load_weights(cfg.path("W"));
  if (cfg.has("A")) {
    const auto file = cfg.path("A");
    const auto a = load_adjacency(file);
    return with_context(file, [&] { return row_standardize(a); });
  }
  return std::nullopt;
}

/// Covariates from "X", optionally restricted to the 1-based "columns".
Eigen::MatrixXd covariates_from_config(Config& cfg, Eigen::Index n) {
  Eigen::MatrixXd x(n, 0);
  if (cfg.has("X")) {
    const auto file = cfg.path("X");
    x = io::read_matrix_csv(file);
    require(x.rows() == n, fmt::format("{}: has {} rows but y has {}", file.string(), x.rows(), n));
  }
  if (cfg.has("columns")) {
    const auto cols = cfg.value<std::vector<int>>("columns");
    Eigen::MatrixXd picked(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      require(cols[j] >= 1 && cols[j] <= x.cols(),
              fmt::format("{}: column {} is outside 1..{}", cfg.where(), cols[j], x.cols()));
      picked.col(static_cast<Eigen::Index>(j)) = x.col(cols[j] - 1);
    }
    x = std::move(picked);
  }
  return x;
}

SarDataset dataset_from_config(Config& cfg) {
  const auto y_file = cfg.path("y");
  Eigen::VectorXd y = with_context(y_file, [&] { return io::read_vector_csv(y_file); });
  auto weights = weights_from_config(cfg);
  require(weights.has_value(), cfg.where() + ": one of 'W' or 'A' is required");
  require(weights->size() == y.size(),
          fmt::format("{}: W is {}x{} but y has {} rows", cfg.where(), weights->size(),
                      weights->size(), y.size()));
  Eigen::MatrixXd x = covariates_from_config(cfg, y.size());
  return SarDataset(std::move(y), std::move(x), std::move(*weights));
}

PriorConfig prior_from_config(Config& cfg) {
  PriorConfig prior;
  Config p = cfg.has("prior") ? cfg.child("prior") : Config(json::object(), {}, cfg.where());
  prior.a = p.value<double>("a", prior.a);
  prior.b = p.value<double>("b", prior.b);
  prior.eta = p.value<double>("eta", prior.eta);
  cfg.adopt("prior", p);
  prior.validate();
  return prior;
}

// ---------------------------------------------------------------- graph

int cmd_graph(const Common& common, std::ostream& out) {
  Config cfg = Config::load(common.config);
  const int n = cfg.value<int>("n");
  std::optional<std::uint64_t> seed;
  std::optional<AdjacencyMatrix> adjacency;
  if (cfg.has("nodes")) {
    const auto nodes = cfg.value<std::vector<int>>("nodes");
    seed = optional_seed(cfg, common);
    adjacency = build_adjacency(nodes, n);
  } else {
    seed = resolve_seed(cfg, common);
    adjacency = random_adjacency(n, derive_seed(*seed, 0));
  }
  cfg.done();
  const WeightMatrix weights = row_standardize(*adjacency);

  json report = provenance("graph", cfg, seed);
  report["n"] = n;
  report["n_edges"] = adjacency->edges().size();
  io::OutputSet files;
  files.add("A.csv", io::format_matrix_csv(adjacency->entries()));
  files.add("W.csv", io::format_matrix_csv(weights.entries()));
  files.add("edges.csv", io::format_edges_csv(*adjacency));
  files.add("graph.json", dump(report));
  files.commit(common.out);
  if (seed) out << "seed: " << *seed << "\n";
  out << fmt::format("graph: {} nodes, {} edges\n", n, adjacency->edges().size());
  return kOk;
}

// ------------------------------------------------------------- simulate

int cmd_simulate(const Common& common, std::ostream& out) {
  Config cfg = Config::load(common.config);
  const std::uint64_t seed = resolve_seed(cfg, common);
  SarParams params;
  params.rho = cfg.value<double>("rho");
  params.sigma = cfg.value<double>("sigma");
  params.beta = to_eigen(cfg.value<std::vector<double>>("beta"));
  params.validate();
  const auto used = params.beta.size() - 1;

  std::optional<AdjacencyMatrix> adjacency;
  auto weights = weights_from_config(cfg);
  if (!weights) {
    adjacency = random_adjacency(cfg.value<int>("n"), derive_seed(seed, 0));
    weights = row_standardize(*adjacency);
  }
  const Eigen::Index n = weights->size();

  Eigen::MatrixXd x;
  if (cfg.has("X")) {
    x = covariates_from_config(cfg, n);
  } else {
    const int k = cfg.value<int>("n_covariates", static_cast<int>(used));
    x = random_covariates(static_cast<int>(n), k, derive_seed(seed, 1));
  }
  require(used <= x.cols(), fmt::format("{}: beta has {} slopes but only {} covariates",
                                        cfg.where(), used, x.cols()));

  std::optional<int> position;
  double level = 0.99;
  if (cfg.has("contaminate")) {
    Config c = cfg.child("contaminate");
    position = c.value<int>("position");
    level = c.value<double>("level", level);
    cfg.adopt("contaminate", c);
  }
  cfg.done();

  try {
    SpatialFilter guard(*weights, params.rho, kSimulationMinRcond);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) +
                         "; rho is too close to a singular value of W to simulate from");
  }
  const Eigen::VectorXd y =
      sar_simulate(*weights, x.leftCols(used), params, derive_seed(seed, 2));

  io::OutputSet files;
  json report = provenance("simulate", cfg, seed);
  report["n"] = n;
  report["n_covariates"] = x.cols();
  files.add("y.csv", io::format_matrix_csv(y));
  if (position) {
    const Eigen::VectorXd z = contaminate(y, *position, level);
    files.add("z.csv", io::format_matrix_csv(z));
    report["contaminated"] = {{"position", *position},
                              {"level", level},
                              {"shift", z[*position - 1] - y[*position - 1]}};
  }
  files.add("W.csv", io::format_matrix_csv(weights->entries()));
  files.add("X.csv", io::format_matrix_csv(x));
  if (adjacency) {
    files.add("A.csv", io::format_matrix_csv(adjacency->entries()));
    files.add("edges.csv", io::format_edges_csv(*adjacency));
  }
  files.add("simulate.json", dump(report));
  files.commit(common.out);
  out << "seed: " << seed << "\n";
  return kOk;
}

// ------------------------------------------------------------------ fit

json summary_json(const std::vector<SummaryRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"parameter", r.parameter},
                   {"mean", r.mean},
                   {"q025", r.q025},
                   {"q50", r.q50},
                   {"q975", r.q975},
                   {"ess", r.ess},
                   {"rhat", r.rhat}});
  return arr;
}

int cmd_fit(const Common& common, std::ostream& out) {
  Config cfg = Config::load(common.config);
  const std::uint64_t seed = resolve_seed(cfg, common);
  const SarDataset data = dataset_from_config(cfg);
  SamplerOptions options;
  options.seed = seed;
  options.threads = common.threads;
  options.n_chains = cfg.value<int>("n_chains", options.n_chains);
  options.n_iter = cfg.value<int>("n_iter", options.n_iter);
  options.steps_per_iteration =
      cfg.value<int>("steps_per_iteration", options.steps_per_iteration);
  const auto proposal = cfg.value<std::string>("proposal", "diagonal");
  require(proposal == "diagonal" || proposal == "dense",
          cfg.where() + ": proposal must be 'diagonal' or 'dense'");
  options.proposal = proposal == "dense" ? ProposalKind::Dense : ProposalKind::Diagonal;
  const PriorConfig prior = prior_from_config(cfg);
  cfg.done();
  options.validate();

  const FitResult result = fit(data, prior, options);
  const auto rows = summarize(result.draws);
  const Eigen::MatrixXd ll = pointwise_log_likelihood_matrix(data, result.draws);

  json report = provenance("fit", cfg, seed);
  report["n"] = data.n();
  report["k"] = data.k();
  report["n_draws"] = result.draws.n_draws();
  report["acceptance"] = result.acceptance;
  report["summary"] = summary_json(rows);

  io::OutputSet files;
  files.add("draws.csv", io::format_draws_csv(result.draws));
  files.add("loglik.csv", io::format_matrix_csv(ll));
  files.add("summary.json", dump(report));
  files.commit(common.out);

  out << "seed: " << seed << "\n";
  out << fmt::format("{:<10}{:>10}{:>10}{:>10}{:>10}{:>9}{:>8}\n", "parameter", "mean", "2.5%",
                     "50%", "97.5%", "ess", "rhat");
  for (const auto& r : rows)
    out << fmt::format("{:<10}{:>10.4f}{:>10.4f}{:>10.4f}{:>10.4f}{:>9.0f}{:>8.3f}\n",
                       r.parameter, r.mean, r.q025, r.q50, r.q975, r.ess, r.rhat);
  return kOk;
}

// -------------------------------------------------------------- compare

int cmd_compare(const Common& common, std::ostream& out) {
  Config cfg = Config::load(common.config);
  const auto seed = optional_seed(cfg, common);
  auto models = cfg.children("models");
  require(models.size() >= 2, cfg.where() + ": compare needs at least two models");
  std::vector<ComparisonEntry> entries;
  Eigen::Index n = -1;
  std::string first;
  for (std::size_t m = 0; m < models.size(); ++m) {
    const auto label = models[m].value<std::string>("label", "M" + std::to_string(m + 1));
    const auto file = models[m].path("loglik");
    const Eigen::MatrixXd ll = io::read_matrix_csv(file);
    require(ll.rows() >= 2, file.string() + ": need at least two draws");
    if (n < 0) {
      n = ll.cols();
      first = file.string();
    }
    require(ll.cols() == n, fmt::format("{}: has {} observations but {} has {}", file.string(),
                                        ll.cols(), first, n));
    entries.push_back(with_context(file, [&] { return make_entry(label, ll); }));
  }
  cfg.adopt("models", models);
  cfg.done();

  const ComparisonReport report = compare(entries);
  json j = provenance("compare", cfg, seed);
  json table = json::array();
  for (const auto& e : report.table)
    table.push_back({{"label", e.label},
                     {"waic", e.waic},
                     {"waic_se", e.waic_se},
                     {"p_waic", e.p_waic},
                     {"loo", e.loo},
                     {"loo_se", e.loo_se},
                     {"loo_term_one", e.loo_term_one}});
  j["table"] = std::move(table);

  io::OutputSet files;
  files.add("comparison.json", dump(j));
  files.add("comparison.csv", report.csv);
  files.add("comparison.svg", report.svg);
  files.commit(common.out);
  out << fmt::format("{:<12}{:>12}{:>10}{:>12}{:>10}\n", "model", "waic", "se", "loo", "se");
  for (const auto& e : report.table)
    out << fmt::format("{:<12}{:>12.3f}{:>10.3f}{:>12.3f}{:>10.3f}\n", e.label, e.waic,
                       e.waic_se, e.loo, e.loo_se);
  return kOk;
}

// ------------------------------------------------------------- diagnose

struct MeasureRun {
  std::string name;
  DivergenceReport report;
};

int cmd_diagnose(const Common& common, std::ostream& out) {
  Config cfg = Config::load(common.config);
  const auto seed = optional_seed(cfg, common);
  const SarDataset data = dataset_from_config(cfg);
  const auto draws_file = cfg.path("draws");
  const PosteriorDraws draws = io::read_draws_csv(draws_file);
  require(draws.n_beta() == data.k() + 1,
          fmt::format("{}: draws carry {} coefficients but the data set has {} (intercept "
                      "included)",
                      draws_file.string(), draws.n_beta(), data.k() + 1));
  const PriorConfig prior = prior_from_config(cfg);

  const auto measures =
      cfg.value<std::vector<std::string>>("measures", {"kl", "is", "l2"});
  require(!measures.empty(), cfg.where() + ": 'measures' is empty");
  std::set<std::string> seen;
  bool needs_alpha = false;
  for (const auto& m : measures) {
    require(m == "kl" || m == "is" || m == "l2" || m == "bregman",
            cfg.where() + ": unknown measure '" + m + "' (use kl, is, l2 or bregman)");
    require(seen.insert(m).second, cfg.where() + ": measure '" + m + "' listed twice");
    needs_alpha = needs_alpha || m == "bregman";
  }
  const double alpha = needs_alpha ? cfg.value<double>("alpha") : 0.0;
  const AuxKind aux = aux_kind_from_code(cfg.value<int>("dist", 3));
  const ReportType type = report_type_from_code(cfg.value<int>("type", 1));
  const int method_code = cfg.value<int>("yhat_method", 1);
  require(method_code == 1 || method_code == 2,
          cfg.where() + ": yhat_method must be 1 (mean) or 2 (median)");
  const auto method = static_cast<ImputationMethod>(method_code);
  const auto basis_name = cfg.value<std::string>("yhat_basis", "conditional");
  require(basis_name == "conditional" || basis_name == "reduced_form",
          cfg.where() + ": yhat_basis must be 'conditional' or 'reduced_form'");
  const auto basis =
      basis_name == "conditional" ? ImputationBasis::Conditional : ImputationBasis::ReducedForm;
  const bool per_draw = cfg.value<bool>("per_draw", false);
  cfg.done();
  if (needs_alpha) {
    require(alpha != 1.0, "alpha = 1 is the Kullback-Leibler case; use measure 'kl'");
    require(alpha != 0.0, "alpha = 0 is the Itakura-Saito case; use measure 'is'");
  }

  const Eigen::VectorXd yhat = impute_yhat(data, draws, method, basis, common.threads);
  std::vector<MeasureRun> runs;
  for (const auto& m : measures) {
    if (m == "kl")
      runs.push_back({m, kl_divergence(data, yhat, draws, type, common.threads)});
    else if (m == "is")
      runs.push_back({m, is_divergence(data, yhat, draws, prior, aux, type, common.threads)});
    else if (m == "l2")
      runs.push_back(
          {m, bregman_divergence(data, yhat, draws, prior, aux, 2.0, type, common.threads)});
    else
      runs.push_back({fmt::format("bregman({:g})", alpha),
                      bregman_divergence(data, yhat, draws, prior, aux, alpha, type,
                                         common.threads)});
  }

  json j = provenance("diagnose", cfg, seed);
  j["n"] = data.n();
  j["n_draws"] = draws.n_draws();
  j["yhat"] = {{"method", method == ImputationMethod::Mean ? "mean" : "median"},
               {"method_code", method_code},
               {"basis", basis_name},
               {"values", to_vector(yhat)}};
  json reports = json::array();
  std::string tidy = "observation,measure,value\n";
  std::vector<svg::Series> series;
  for (const auto& r : runs) {
    json item{{"name", r.name},
              {"measure", r.report.measure},
              {"alpha", r.report.alpha},
              {"type", static_cast<int>(r.report.type)},
              {"dist", r.report.measure == "kl" ? json(nullptr) : json(to_string(aux))},
              {"per_obs", to_vector(r.report.per_obs)},
              {"flags", r.report.flags}};
    if (r.report.measure != "kl") item["log_normalizer"] = r.report.log_normalizer;
    reports.push_back(std::move(item));
    svg::Series s{r.name, {}};
    for (Eigen::Index i = 0; i < r.report.per_obs.size(); ++i) {
      tidy += fmt::format("{},{},{:.17g}\n", i + 1, r.name, r.report.per_obs[i]);
      s.points.push_back({static_cast<double>(i + 1), r.report.per_obs[i]});
    }
    series.push_back(std::move(s));
  }
  j["reports"] = std::move(reports);

  const bool proportions = type == ReportType::SupremeProportion;
  svg::PlotSpec spec;
  spec.title = proportions ? "Supreme proportion by observation" : "Divergence by observation";
  spec.x_label = "observation";
  spec.y_label = proportions ? "P" : "divergence";

  io::OutputSet files;
  files.add("divergence.json", dump(j));
  files.add("divergence.csv", tidy);
  files.add("divergence.svg", svg::scatter(spec, series));
  if (proportions) {
    spec.title = "Influential observations: measures overlaid";
    files.add("overlay.csv", tidy);
    files.add("overlay.svg", svg::scatter(spec, series));
  }
  if (per_draw)
    for (const auto& r : runs)
      files.add("per_draw_" + r.name + ".csv", io::format_matrix_csv(r.report.per_draw));
  files.commit(common.out);

  if (seed) out << "seed: " << *seed << "\n";
  for (const auto& r : runs) {
    Eigen::Index top = 0;
    r.report.per_obs.maxCoeff(&top);
    out << fmt::format("{}: largest at observation {} ({:.4g})", r.name, top + 1,
                       r.report.per_obs[top]);
    for (const auto& f : r.report.flags) out << "; " << f;
    out << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian SAR models: simulation, fitting, comparison and influence diagnostics",
               "sarinf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SARINF_VERSION);
  Common common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", common.config, "JSON configuration file")->required();
    sub->add_option("--seed", common.seed, "random seed (required where randomness is used)");
    sub->add_option("--threads", common.threads, "worker threads (0: all cores)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", common.out, "output directory")->required();
  };
  auto* graph = app.add_subcommand("graph", "random or explicit graph -> A.csv, W.csv, edges.csv");
  auto* simulate = app.add_subcommand("simulate", "simulate y (and a contaminated z) from a SAR");
  auto* fit_cmd = app.add_subcommand("fit", "posterior draws, summary and pointwise log-lik");
  auto* compare_cmd = app.add_subcommand("compare", "WAIC and LOO across fitted models");
  auto* diagnose = app.add_subcommand("diagnose", "case-influence divergences per observation");
  for (auto* sub : {graph, simulate, fit_cmd, compare_cmd, diagnose}) add_common(sub);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }
  for (auto* sub : {graph, simulate, fit_cmd, compare_cmd, diagnose})
    if (sub->parsed()) common.seed_given = sub->count("--seed") > 0;

  try {
    if (graph->parsed()) return cmd_graph(common, out);
    if (simulate->parsed()) return cmd_simulate(common, out);
    if (fit_cmd->parsed()) return cmd_fit(common, out);
    if (compare_cmd->parsed()) return cmd_compare(common, out);
    return cmd_diagnose(common, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace sarinf::cli
