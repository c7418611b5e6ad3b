#include "pebble/simulation.hpp"

#include <cmath>

#include "pebble/errors.hpp"
#include "pebble/parallel.hpp"

namespace pebble {
namespace {

constexpr int kMaxRedraws = 1000;
constexpr double kMaxExperimentFailureRate = 0.05;

ExperimentCoverage score_intervals(const IntervalSet& set, const Coefficients& beta, bool region) {
  ExperimentCoverage out;
  out.region = region;
  for (std::size_t j = 0; j < set.coords.size(); ++j) {
    const auto& ci = set.coords[j];
    const double b = beta[static_cast<Eigen::Index>(j)];
    out.middle.push_back(ci.covers(b));
    out.upper.push_back(ci.upper_covers(b));
    out.lower.push_back(ci.lower_covers(b));
    out.width.push_back(ci.width());
  }
  return out;
}

MethodCoverage summarize(const std::vector<const ExperimentCoverage*>& runs, Eigen::Index p,
                         Eigen::Index min_j, Eigen::Index max_j) {
  MethodCoverage out;
  const double count = static_cast<double>(runs.size());
  std::vector<CoordSummary> per(static_cast<std::size_t>(p));
  for (const auto* r : runs) {
    out.region_lower += r->region;
    for (std::size_t j = 0; j < per.size(); ++j) {
      per[j].middle += r->middle[j];
      per[j].upper += r->upper[j];
      per[j].lower += r->lower[j];
      per[j].width += r->width[j];
    }
  }
  out.region_lower /= count;
  for (auto& s : per) {
    s.middle /= count;
    s.upper /= count;
    s.lower /= count;
    s.width /= count;
    out.average.middle += s.middle / static_cast<double>(p);
    out.average.upper += s.upper / static_cast<double>(p);
    out.average.lower += s.lower / static_cast<double>(p);
    out.average.width += s.width / static_cast<double>(p);
  }
  out.min_coord = per[static_cast<std::size_t>(min_j)];
  out.max_coord = per[static_cast<std::size_t>(max_j)];
  return out;
}

}  // namespace

void Scenario::validate() const {
  if (p < 1 || p > static_cast<Eigen::Index>(kTrueCoefficients.size())) {
    fail(ErrorKind::Precondition, "scenario p must lie in [1, 8]");
  }
  if (n < p + 1) fail(ErrorKind::Precondition, "scenario needs n >= p + 1");
  if (reps < 1) fail(ErrorKind::Precondition, "scenario needs reps >= 1");
  if (B < kMinBootstrap) fail(ErrorKind::Precondition, "scenario needs B >= 100");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::Precondition, "alpha must lie in (0, 1)");
}

Coefficients Scenario::beta_true() const {
  Coefficients b(p);
  for (Eigen::Index j = 0; j < p; ++j) b[j] = kTrueCoefficients[static_cast<std::size_t>(j)];
  return b;
}

SymMatrix Scenario::covariance() const {
  Matrix s(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      s(i, j) = std::pow(0.5, static_cast<double>(std::abs(i - j)));
    }
  }
  return SymMatrix(s);
}

SimulatedData generate_dataset(const Scenario& scn, RandomStream& rng) {
  const Matrix chol = cholesky_lower(scn.covariance());
  const Coefficients beta = scn.beta_true();
  for (int redraw = 0; redraw <= kMaxRedraws; ++redraw) {
    Matrix x(scn.n, scn.p);
    Vector xi(scn.p);
    for (Eigen::Index i = 0; i < scn.n; ++i) {
      for (Eigen::Index j = 0; j < scn.p; ++j) xi[j] = rng.next_gaussian();
      x.row(i) = (chol * xi).transpose();
    }
    Vector y(scn.n);
    Eigen::Index ones = 0;
    for (Eigen::Index i = 0; i < scn.n; ++i) {
      y[i] = rng.next_uniform() < predict_prob(beta, x.row(i).transpose()) ? 1.0 : 0.0;
      ones += y[i] == 1.0;
    }
    if (ones == 0 || ones == scn.n) continue;
    return SimulatedData{Dataset(std::move(x), std::move(y)), beta, redraw};
  }
  fail(ErrorKind::DegenerateResponse, "could not draw a non-constant response");
}

std::pair<Eigen::Index, Eigen::Index> extreme_coordinates(const Coefficients& beta) {
  Eigen::Index lo = 0, hi = 0;
  for (Eigen::Index j = 1; j < beta.size(); ++j) {
    if (std::abs(beta[j]) < std::abs(beta[lo])) lo = j;
    if (std::abs(beta[j]) > std::abs(beta[hi])) hi = j;
  }
  return {lo, hi};
}

ExperimentResult run_experiment(const Scenario& scn, int experiment_index) {
  const RandomStream master(scn.seed);
  const RandomStream exp_stream = master.derive("experiment", static_cast<std::uint64_t>(experiment_index));
  RandomStream data_stream = exp_stream.derive("data", 0);
  RandomStream smooth_stream = exp_stream.derive("smooth", 0);

  ExperimentResult out;
  SimulatedData sim = generate_dataset(scn, data_stream);
  out.redraws = sim.redraws;
  try {
    const FittedModel fitted = fit_mle(sim.data);
    const SmoothingConfig cfg = make_smoothing_config(scn.n, scn.p, smooth_stream);
    const BootstrapEnsemble ens = run_pebble(sim.data, fitted, scn.B, cfg, exp_stream);
    out.failed_replicates = ens.failed_replicates;

    const IntervalSet pebble_ci = make_intervals(fitted, ens, scn.alpha, cfg, scn.n);
    const bool pebble_region =
        pivot_smoothed(fitted, sim.beta_true, scn.n, cfg).h_norm <= pebble_ci.region_radius;
    out.pebble = score_intervals(pebble_ci, sim.beta_true, pebble_region);

    const IntervalSet normal_ci = normal_intervals(fitted, scn.alpha, scn.n);
    const bool normal_region =
        pivot_normal(fitted, sim.beta_true, scn.n).norm() <= normal_ci.region_radius;
    out.normal = score_intervals(normal_ci, sim.beta_true, normal_region);
    out.ok = true;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Separation:
      case ErrorKind::SingularMatrix:
      case ErrorKind::TooManyFailures:
        out.ok = false;
        break;
      default:
        throw;
    }
  }
  return out;
}

CoverageReport run_coverage_study(const Scenario& scn) {
  scn.validate();
  std::vector<ExperimentResult> results(static_cast<std::size_t>(scn.reps));
  parallel_for(results.size(), scn.threads,
               [&](std::size_t e) { results[e] = run_experiment(scn, static_cast<int>(e)); });

  CoverageReport report;
  report.scenario = scn;
  std::tie(report.min_index, report.max_index) = extreme_coordinates(scn.beta_true());
  std::vector<const ExperimentCoverage*> pebble_runs, normal_runs;
  for (const auto& r : results) {
    report.data_redraws += r.redraws;
    if (!r.ok) {
      ++report.failed_experiments;
      continue;
    }
    report.failed_replicates += r.failed_replicates;
    pebble_runs.push_back(&r.pebble);
    normal_runs.push_back(&r.normal);
  }
  report.experiments_used = static_cast<int>(pebble_runs.size());
  if (report.failed_experiments > kMaxExperimentFailureRate * scn.reps ||
      report.experiments_used == 0) {
    fail(ErrorKind::TooManyFailures, std::to_string(report.failed_experiments) + " of " +
                                         std::to_string(scn.reps) + " experiments failed");
  }
  report.pebble = summarize(pebble_runs, scn.p, report.min_index, report.max_index);
  report.normal = summarize(normal_runs, scn.p, report.min_index, report.max_index);
  return report;
}

}  // namespace pebble
