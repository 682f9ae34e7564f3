#include <pybind11/pybind11.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

#include "bhattbayes/core.hpp"
#include "bhattbayes/errors.hpp"
#include "bhattbayes/estimators.hpp"
#include "bhattbayes/linalg.hpp"
#include "bhattbayes/minimax.hpp"
#include "bhattbayes/posterior.hpp"
#include "bhattbayes/risk.hpp"

namespace py = pybind11;
using namespace bhattbayes;

namespace {

ProbVector to_prob(const std::vector<double>& v) { return ProbVector(v); }

std::vector<std::vector<double>> to_rows(const EstimatorTable& t) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : t.rows) rows.push_back(r.vector());
  return rows;
}

EstimatorTable from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("estimator table needs at least 2 rows");
  EstimatorTable t{static_cast<int>(rows.size()) - 1, {}};
  for (const auto& r : rows) t.rows.emplace_back(r);
  return t;
}

Posterior to_posterior(const py::object& obj) {
  if (py::isinstance<DirichletPosterior>(obj)) return obj.cast<DirichletPosterior>();
  if (py::isinstance<ParticlePosterior>(obj)) return obj.cast<ParticlePosterior>();
  throw py::type_error("expected DirichletPosterior or ParticlePosterior");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bayes and minimax estimators for multinomial parameters under Bhattacharyya losses";
  m.attr("__version__") = bhattbayes::version();

  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::enum_<LossKind>(m, "LossKind")
      .value("OneMinusB", LossKind::OneMinusB)
      .value("OneMinusBSquared", LossKind::OneMinusBSquared);

  py::enum_<EstimatorKind>(m, "EstimatorKind")
      .value("BayesB1", EstimatorKind::BayesB1)
      .value("BayesB2", EstimatorKind::BayesB2)
      .value("PosteriorMean", EstimatorKind::PosteriorMean)
      .value("MLE", EstimatorKind::MLE);

  py::class_<DirichletPosterior>(m, "DirichletPosterior")
      .def(py::init<std::vector<double>>(), py::arg("alpha"))
      .def_property_readonly("alpha", &DirichletPosterior::alpha)
      .def("__repr__", [](const DirichletPosterior& d) {
        return "DirichletPosterior(alpha=" + py::repr(py::cast(d.alpha())).cast<std::string>() + ")";
      });

  py::class_<ParticlePosterior>(m, "ParticlePosterior")
      .def(py::init([](const std::vector<std::vector<double>>& points, const std::vector<double>& weights) {
             std::vector<ProbVector> pts;
             for (const auto& p : points) pts.emplace_back(p);
             return ParticlePosterior(std::move(pts), weights);
           }),
           py::arg("points"), py::arg("weights"))
      .def_property_readonly("points",
                             [](const ParticlePosterior& p) {
                               std::vector<std::vector<double>> out;
                               for (const auto& x : p.points()) out.push_back(x.vector());
                               return out;
                             })
      .def_property_readonly("weights", &ParticlePosterior::weights);

  m.def("bhattacharyya", [](const std::vector<double>& p, const std::vector<double>& q) {
    return bhattacharyya(to_prob(p), to_prob(q));
  }, py::arg("p"), py::arg("q"));
  m.def("loss", [](LossKind kind, const std::vector<double>& p, const std::vector<double>& q) {
    return loss(kind, to_prob(p), to_prob(q));
  }, py::arg("kind"), py::arg("p"), py::arg("q"));

  m.def("sqrt_moment_vector", [](const py::object& p) { return sqrt_moment_vector(to_posterior(p)); },
        py::arg("posterior"));
  m.def("moment_matrix", [](const py::object& p) { return moment_matrix(to_posterior(p)).rows(); }, py::arg("posterior"));
  m.def("posterior_mean", [](const py::object& p) { return posterior_mean(to_posterior(p)).vector(); }, py::arg("posterior"));
  m.def("posterior_update",
        py::overload_cast<double, int, int>(&posterior_update),
        py::arg("prior_beta"), py::arg("N"), py::arg("n"));

  m.def("bayes_b1", [](const py::object& p) { return bayes_b1(to_posterior(p)).vector(); }, py::arg("posterior"));
  m.def("bayes_b2", [](const py::object& p) { return bayes_b2(to_posterior(p)).vector(); }, py::arg("posterior"));
  m.def("mle", [](int n, int big_n) { return mle(n, big_n).vector(); }, py::arg("n"), py::arg("N"));
  m.def("top_eigenpair", [](const std::vector<std::vector<double>>& rows) {
    const auto pair = top_eigenpair(SquareMatrix::from_rows(rows));
    return py::make_tuple(pair.value, pair.vector);
  }, py::arg("matrix"));
  m.def("estimator_table", [](EstimatorKind kind, int big_n, double beta) {
    return to_rows(estimator_table(kind, big_n, beta));
  }, py::arg("kind"), py::arg("N"), py::arg("prior_beta") = 0.5);

  m.def("pointwise_risk", [](double p0, const std::vector<std::vector<double>>& table, LossKind loss) {
    return pointwise_risk(p0, from_rows(table), loss);
  }, py::arg("p0"), py::arg("table"), py::arg("loss"));
  m.def("posterior_risk", [](const py::object& post, const std::vector<double>& est, LossKind loss) {
    return posterior_risk(to_posterior(post), to_prob(est), loss);
  }, py::arg("posterior"), py::arg("estimate"), py::arg("loss"));
  m.def("bayes_risk_conjugate", [](double beta, const std::vector<std::vector<double>>& table, LossKind loss) {
    return bayes_risk(beta, from_rows(table), loss);
  }, py::arg("prior_beta"), py::arg("table"), py::arg("loss"));
  m.def("bayes_risk_discrete",
        [](const std::vector<double>& support, const std::vector<double>& weights,
           const std::vector<std::vector<double>>& table, LossKind loss) {
          return bayes_risk(DiscretePrior(support, weights), from_rows(table), loss);
        },
        py::arg("support"), py::arg("weights"), py::arg("table"), py::arg("loss"));
  m.def("max_risk", [](const std::vector<std::vector<double>>& table, LossKind loss, int grid) {
    MaxRiskOptions opts;
    opts.grid = grid;
    const auto peak = max_risk(from_rows(table), loss, opts);
    return py::make_tuple(peak.p0, peak.value);
  }, py::arg("table"), py::arg("loss"), py::arg("grid") = 2001);
  m.def("relative_suboptimality",
        [](const py::object& p, LossKind loss) { return relative_suboptimality(to_posterior(p), loss); },
        py::arg("posterior"),
        py::arg("loss") = LossKind::OneMinusBSquared);

  m.def("beta_scan",
        [](int big_n, LossKind loss, EstimatorKind family, double beta_min, double beta_max, double step) {
          BetaScanOptions opts;
          opts.trials = big_n;
          opts.loss = loss;
          opts.family = family;
          opts.beta_min = beta_min;
          opts.beta_max = beta_max;
          opts.step = step;
          const auto r = beta_scan(opts);
          std::vector<std::pair<double, double>> curve;
          for (const auto& pt : r.curve) curve.emplace_back(pt.beta, pt.max_risk);
          return py::make_tuple(r.beta_star, r.max_risk_star, curve);
        },
        py::arg("N"), py::arg("loss") = LossKind::OneMinusBSquared,
        py::arg("family") = EstimatorKind::BayesB2, py::arg("beta_min") = 0.05, py::arg("beta_max") = 2.0,
        py::arg("step") = 0.01);

  m.def("bayes_estimator_for_discrete_prior",
        [](const std::vector<double>& support, const std::vector<double>& weights, int big_n, LossKind loss) {
          return to_rows(bayes_estimator_for_discrete_prior(DiscretePrior(support, weights), big_n, loss));
        },
        py::arg("support"), py::arg("weights"), py::arg("N"), py::arg("loss") = LossKind::OneMinusBSquared);

  m.def("kempthorne",
        [](int big_n, LossKind loss, double tol, double alpha, int max_iters, std::uint64_t seed,
           std::optional<std::pair<std::vector<double>, std::vector<double>>> init) {
          KempthorneConfig cfg;
          cfg.trials = big_n;
          cfg.loss = loss;
          cfg.tol = tol;
          cfg.alpha_mix = alpha;
          cfg.max_outer_iters = max_iters;
          cfg.seed = seed;
          const DiscretePrior start =
              init ? DiscretePrior(init->first, init->second) : default_initial_prior(big_n, loss);
          KempthorneResult r;
          {
            py::gil_scoped_release release;
            r = kempthorne(cfg, start);
          }
          py::dict out;
          out["support"] = r.prior.support();
          out["weights"] = r.prior.weights();
          out["avg_risk"] = r.avg_risk;
          out["max_risk"] = r.max_risk;
          out["diff"] = r.diff;
          out["converged"] = r.converged;
          out["iters"] = r.outer_iters;
          out["estimator"] = to_rows(r.estimator);
          return out;
        },
        py::arg("N"), py::arg("loss") = LossKind::OneMinusBSquared, py::arg("tol") = 1e-3,
        py::arg("alpha") = 0.01, py::arg("max_iters") = 50, py::arg("seed") = 0,
        py::arg("init") = py::none());
}
