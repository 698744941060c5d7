// Python bindings: a thin functional layer over the library. Matrices come
// and go as numpy arrays; draws travel as (values, chain_ids) pairs.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sarinf/comparison.hpp"
#include "sarinf/divergence.hpp"
#include "sarinf/error.hpp"
#include "sarinf/graph.hpp"
#include "sarinf/sampler.hpp"
#include "sarinf/workload.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace sarinf;

namespace {

SarDataset dataset(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w) {
  return SarDataset(y, x, WeightMatrix::from_dense(w));
}

PosteriorDraws draws_from(const Eigen::MatrixXd& values, const std::vector<int>& chain_ids) {
  PosteriorDraws d;
  d.values = values;
  d.chain_ids = chain_ids;
  int top = 0;
  for (int c : chain_ids) top = std::max(top, c);
  d.n_chains = top;
  d.validate();
  return d;
}

PriorConfig prior_of(double a, double b, double eta) {
  PriorConfig p{a, b, eta};
  p.validate();
  return p;
}

ReportType type_of(int code) { return report_type_from_code(code); }

AuxKind aux_of(const std::string& name) {
  if (name == "exponential") return AuxKind::Exponential;
  if (name == "gamma") return AuxKind::Gamma;
  if (name == "normal") return AuxKind::Normal;
  if (name == "mvn") return AuxKind::MultivariateNormal;
  throw InvalidArgument("dist must be one of exponential, gamma, normal, mvn (got '" + name + "')");
}

py::dict report_dict(const DivergenceReport& r) {
  py::dict d;
  d["measure"] = r.measure;
  d["alpha"] = r.alpha;
  d["type"] = static_cast<int>(r.type);
  d["per_obs"] = r.per_obs;
  d["per_draw"] = r.per_draw;
  d["log_normalizer"] = r.log_normalizer;
  d["flags"] = r.flags;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sarinf, m) {
  m.doc() = "Bayesian SAR model fitting, model comparison and divergence diagnostics";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def(
      "build_adjacency",
      [](const std::vector<int>& nodes, int n) { return build_adjacency(nodes, n).entries(); },
      py::arg("nodes"), py::arg("n"));
  m.def(
      "row_standardize",
      [](const Eigen::MatrixXd& a) {
        return row_standardize(AdjacencyMatrix::from_dense(a)).entries();
      },
      py::arg("adjacency"));
  m.def(
      "random_adjacency", [](int n, std::uint64_t seed) { return random_adjacency(n, seed).entries(); },
      py::arg("n"), py::arg("seed"));

  m.def(
      "simulate_workload",
      [](int n, int n_covariates, double rho, double sigma, const Eigen::VectorXd& beta,
         std::uint64_t seed, std::optional<int> contaminate_at) {
        const Workload w =
            simulate_workload(n, n_covariates, SarParams{rho, sigma, beta}, seed, contaminate_at);
        py::dict d;
        d["A"] = w.adjacency.entries();
        d["W"] = w.weights.entries();
        d["X"] = w.covariates;
        d["y"] = w.y;
        d["z"] = w.z ? py::cast(*w.z) : py::none();
        return d;
      },
      py::arg("n"), py::arg("n_covariates"), py::arg("rho"), py::arg("sigma"), py::arg("beta"),
      py::arg("seed"), py::arg("contaminate_at") = py::none());
  m.def("contaminate", &contaminate, py::arg("y"), py::arg("position"), py::arg("level") = 0.99);

  m.def(
      "log_likelihood",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w, double rho,
         double sigma, const Eigen::VectorXd& beta) {
        return log_likelihood(dataset(y, x, w), SarParams{rho, sigma, beta});
      },
      py::arg("y"), py::arg("X"), py::arg("W"), py::arg("rho"), py::arg("sigma"), py::arg("beta"));

  m.def(
      "fit",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w,
         std::uint64_t seed, int n_chains, int n_iter, int threads, double a, double b,
         double eta) {
        SamplerOptions opt;
        opt.seed = seed;
        opt.n_chains = n_chains;
        opt.n_iter = n_iter;
        opt.threads = threads;
        FitResult r;
        {
          py::gil_scoped_release release;
          r = fit(dataset(y, x, w), prior_of(a, b, eta), opt);
        }
        py::dict d;
        d["values"] = r.draws.values;
        d["chain_ids"] = r.draws.chain_ids;
        d["columns"] = PosteriorDraws::column_names(r.draws.n_beta());
        d["acceptance"] = r.acceptance;
        return d;
      },
      py::arg("y"), py::arg("X"), py::arg("W"), py::kw_only(), py::arg("seed"),
      py::arg("n_chains") = 2, py::arg("n_iter") = 10000, py::arg("threads") = 0,
      py::arg("a") = 0.01, py::arg("b") = 0.01, py::arg("eta") = 1.0e4);

  m.def(
      "summarize",
      [](const Eigen::MatrixXd& values, const std::vector<int>& chain_ids) {
        py::list rows;
        for (const auto& r : summarize(draws_from(values, chain_ids))) {
          py::dict d;
          d["parameter"] = r.parameter;
          d["mean"] = r.mean;
          d["q025"] = r.q025;
          d["q50"] = r.q50;
          d["q975"] = r.q975;
          d["ess"] = r.ess;
          d["rhat"] = r.rhat;
          rows.append(d);
        }
        return rows;
      },
      py::arg("values"), py::arg("chain_ids"));

  m.def(
      "pointwise_log_likelihood",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w,
         const Eigen::MatrixXd& values, const std::vector<int>& chain_ids) {
        return pointwise_log_likelihood_matrix(dataset(y, x, w), draws_from(values, chain_ids));
      },
      py::arg("y"), py::arg("X"), py::arg("W"), py::arg("values"), py::arg("chain_ids"));

  m.def(
      "waic",
      [](const Eigen::MatrixXd& ll) {
        const auto r = waic(ll);
        return py::dict("waic"_a = r.waic, "waic_se"_a = r.waic_se, "p_waic"_a = r.p_waic,
                        "lppd"_a = r.lppd);
      },
      py::arg("loglik"));
  m.def(
      "loo_cv",
      [](const Eigen::MatrixXd& ll) {
        const auto r = loo_cv(ll);
        return py::dict("loo"_a = r.loo, "loo_se"_a = r.loo_se, "term_one"_a = r.term_one,
                        "term_two"_a = r.term_two);
      },
      py::arg("loglik"));
  m.def(
      "compare",
      [](const std::vector<std::pair<std::string, Eigen::MatrixXd>>& models) {
        std::vector<ComparisonEntry> entries;
        for (const auto& [label, ll] : models) entries.push_back(make_entry(label, ll));
        py::list table;
        for (const auto& e : compare(std::move(entries)).table)
          table.append(py::dict("label"_a = e.label, "waic"_a = e.waic, "waic_se"_a = e.waic_se,
                                "p_waic"_a = e.p_waic, "loo"_a = e.loo, "loo_se"_a = e.loo_se,
                                "loo_term_one"_a = e.loo_term_one));
        return table;
      },
      py::arg("models"));

  m.def("psi", &psi, py::arg("x"), py::arg("alpha"));
  m.def("psi_prime", &psi_prime, py::arg("x"), py::arg("alpha"));
  m.def("supreme_proportion", &supreme_proportion, py::arg("per_draw"));

  m.def(
      "impute_yhat",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w,
         const Eigen::MatrixXd& values, const std::vector<int>& chain_ids, int method,
         const std::string& basis) {
        require(method == 1 || method == 2, "method must be 1 (mean) or 2 (median)");
        require(basis == "conditional" || basis == "reduced_form",
                "basis must be 'conditional' or 'reduced_form'");
        return impute_yhat(dataset(y, x, w), draws_from(values, chain_ids),
                           static_cast<ImputationMethod>(method),
                           basis == "conditional" ? ImputationBasis::Conditional
                                                  : ImputationBasis::ReducedForm);
      },
      py::arg("y"), py::arg("X"), py::arg("W"), py::arg("values"), py::arg("chain_ids"),
      py::arg("method") = 1, py::arg("basis") = "conditional");

  m.def(
      "kl_divergence",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w,
         const Eigen::VectorXd& yhat, const Eigen::MatrixXd& values,
         const std::vector<int>& chain_ids, int type) {
        return report_dict(
            kl_divergence(dataset(y, x, w), yhat, draws_from(values, chain_ids), type_of(type)));
      },
      py::arg("y"), py::arg("X"), py::arg("W"), py::arg("yhat"), py::arg("values"),
      py::arg("chain_ids"), py::arg("type") = 1);
  m.def(
      "is_divergence",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w,
         const Eigen::VectorXd& yhat, const Eigen::MatrixXd& values,
         const std::vector<int>& chain_ids, int type, const std::string& dist, double a, double b,
         double eta) {
        return report_dict(is_divergence(dataset(y, x, w), yhat, draws_from(values, chain_ids),
                                         prior_of(a, b, eta), aux_of(dist), type_of(type)));
      },
      py::arg("y"), py::arg("X"), py::arg("W"), py::arg("yhat"), py::arg("values"),
      py::arg("chain_ids"), py::arg("type") = 1, py::arg("dist") = "normal", py::arg("a") = 0.01,
      py::arg("b") = 0.01, py::arg("eta") = 1.0e4);
  m.def(
      "bregman_divergence",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w,
         const Eigen::VectorXd& yhat, const Eigen::MatrixXd& values,
         const std::vector<int>& chain_ids, double alpha, int type, const std::string& dist,
         double a, double b, double eta) {
        return report_dict(bregman_divergence(dataset(y, x, w), yhat,
                                              draws_from(values, chain_ids), prior_of(a, b, eta),
                                              aux_of(dist), alpha, type_of(type)));
      },
      py::arg("y"), py::arg("X"), py::arg("W"), py::arg("yhat"), py::arg("values"),
      py::arg("chain_ids"), py::arg("alpha"), py::arg("type") = 1, py::arg("dist") = "normal",
      py::arg("a") = 0.01, py::arg("b") = 0.01, py::arg("eta") = 1.0e4);
}
