#include <optional>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pebble/errors.hpp"
#include "pebble/io.hpp"

namespace py = pybind11;
using namespace pebble;

namespace {

Dataset make_dataset(const Matrix& x, const Vector& y, std::vector<std::string> names) {
  return Dataset(x, y, std::move(names));
}

struct Prepared {
  Dataset data;
  FittedModel fitted;
  SmoothingConfig cfg;
  BootstrapEnsemble ens;
};

Prepared bootstrap(const Matrix& x, const Vector& y, int boot, std::uint64_t seed,
                   std::optional<double> bn, std::optional<Vector> dvar, unsigned threads) {
  Dataset data = make_dataset(x, y, {});
  FittedModel fitted = fit_mle(data);
  const RandomStream master(seed);
  RandomStream smooth = master.derive("smooth", 0);
  if (dvar && dvar->size() == 1) dvar = Vector::Constant(data.p(), (*dvar)[0]);
  SmoothingConfig cfg = make_smoothing_config(data.n(), data.p(), smooth, bn, dvar);
  BootstrapOptions opts;
  opts.threads = threads;
  BootstrapEnsemble ens = run_pebble(data, fitted, boot, cfg, master, opts);
  return {std::move(data), std::move(fitted), std::move(cfg), std::move(ens)};
}

// Reports cross the boundary as JSON text and are parsed on the Python side.
std::string fit_report(const Matrix& x, const Vector& y, double level) {
  const Dataset data = make_dataset(x, y, {});
  const FittedModel fitted = fit_mle(data);
  Json doc = fit_json(fitted, data);
  const IntervalSet wald = normal_intervals(fitted, 1.0 - level, data.n());
  doc["intervals"] = intervals_json(wald, data.names());
  doc["region_radius"] = wald.region_radius;
  return dump_json(doc);
}

std::string ci_report(const Matrix& x, const Vector& y, double level, int boot, std::uint64_t seed,
                      std::optional<double> bn, std::optional<Vector> dvar, unsigned threads) {
  const Prepared run = bootstrap(x, y, boot, seed, bn, std::move(dvar), threads);
  const IntervalSet set = make_intervals(run.fitted, run.ens, 1.0 - level, run.cfg, run.data.n());
  Json doc;
  doc["beta_hat"] = Json::array();
  for (Eigen::Index j = 0; j < run.fitted.beta_hat.size(); ++j) {
    doc["beta_hat"].push_back(run.fitted.beta_hat[j]);
  }
  doc["intervals"] = intervals_json(set, run.data.names());
  doc["region_radius"] = set.region_radius;
  doc["bn"] = run.cfg.b_n;
  doc["failed_replicates"] = run.ens.failed_replicates;
  return dump_json(doc);
}

std::string region_report(const Matrix& x, const Vector& y, const Vector& beta0, double level,
                          int boot, std::uint64_t seed, std::optional<double> bn,
                          std::optional<Vector> dvar, unsigned threads) {
  const Prepared run = bootstrap(x, y, boot, seed, bn, std::move(dvar), threads);
  if (beta0.size() != run.data.p()) fail(ErrorKind::Precondition, "beta0 needs p entries");
  const double radius = quantile(run.ens.norm_samples(), level);
  const double norm = pivot_smoothed(run.fitted, beta0, run.data.n(), run.cfg).h_norm;
  Json doc;
  doc["pivot_norm"] = norm;
  doc["region_radius"] = radius;
  doc["contains"] = norm <= radius;
  doc["failed_replicates"] = run.ens.failed_replicates;
  return dump_json(doc);
}

std::string simulate_report(Eigen::Index n, Eigen::Index p, int reps, int boot, double level,
                            std::uint64_t seed, unsigned threads) {
  Scenario scn;
  scn.n = n;
  scn.p = p;
  scn.reps = reps;
  scn.B = boot;
  scn.alpha = 1.0 - level;
  scn.seed = seed;
  scn.threads = threads;
  return dump_json(coverage_json(run_coverage_study(scn)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Perturbation bootstrap inference for logistic regression";

  static py::exception<Error> error(m, "PebbleError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("fit_report", &fit_report, py::arg("x"), py::arg("y"), py::arg("level") = 0.9);
  m.def("ci_report", &ci_report, py::arg("x"), py::arg("y"), py::arg("level") = 0.9,
        py::arg("boot") = 1000, py::arg("seed") = 1, py::arg("bn") = py::none(),
        py::arg("dvar") = py::none(), py::arg("threads") = 1);
  m.def("region_report", &region_report, py::arg("x"), py::arg("y"), py::arg("beta0"),
        py::arg("level") = 0.9, py::arg("boot") = 1000, py::arg("seed") = 1,
        py::arg("bn") = py::none(), py::arg("dvar") = py::none(), py::arg("threads") = 1);
  m.def("simulate_report", &simulate_report, py::arg("n") = 100, py::arg("p") = 3,
        py::arg("reps") = 1000, py::arg("boot") = 1000, py::arg("level") = 0.9,
        py::arg("seed") = 1, py::arg("threads") = 1);

  m.def("load_csv", [](const std::string& path, const std::string& response, bool intercept) {
    const Dataset d = load_csv(path, response, intercept);
    return py::make_tuple(d.x(), d.y(), d.names());
  }, py::arg("path"), py::arg("response"), py::arg("intercept") = false);

  m.def("default_bn", &default_bn, py::arg("n"), py::arg("p"));
  m.def("quantile", &quantile, py::arg("samples"), py::arg("alpha"));
  m.def("parse_seed", &parse_seed, py::arg("text"));
  m.def("sample_weights", [](std::uint64_t seed, Eigen::Index n) {
    RandomStream rng(seed);
    return sample_weights(rng, n);
  }, py::arg("seed"), py::arg("n"));
}
