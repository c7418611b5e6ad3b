#pragma once

#include <array>
#include <cstdint>

#include "pebble/inference.hpp"

namespace pebble {

/// Full-length true coefficient vector; a scenario uses its first p entries.
inline constexpr std::array<double, 8> kTrueCoefficients = {1.0, 0.5, -2.0, -0.75,
                                                            1.5, -1.0, 1.85, -1.6};

struct Scenario {
  Eigen::Index n = 100;
  Eigen::Index p = 3;
  int reps = 1000;
  int B = 1000;
  double alpha = 0.1;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const;
  Coefficients beta_true() const;
  /// Covariate covariance with entries 0.5^{|i-j|}.
  SymMatrix covariance() const;
};

struct SimulatedData {
  Dataset data;
  Coefficients beta_true;
  /// Draws rejected for a constant response before this one was accepted.
  int redraws = 0;
};

/// Rows x_i ~ N(0, covariance), y_i ~ Bernoulli(p(beta_true | x_i)), no
/// intercept. Constant responses are redrawn from the same stream.
SimulatedData generate_dataset(const Scenario& scn, RandomStream& rng);

/// Coverage indicators of one experiment for one method.
struct ExperimentCoverage {
  bool region = false;
  std::vector<bool> middle, upper, lower;
  std::vector<double> width;
};

struct CoordSummary {
  double middle = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double width = 0.0;
};

struct MethodCoverage {
  double region_lower = 0.0;
  CoordSummary min_coord;
  CoordSummary max_coord;
  CoordSummary average;
};

struct CoverageReport {
  Scenario scenario;
  Eigen::Index min_index = 0;
  Eigen::Index max_index = 0;
  int experiments_used = 0;
  int failed_experiments = 0;
  int data_redraws = 0;
  long long failed_replicates = 0;
  MethodCoverage pebble;
  MethodCoverage normal;
};

/// Indices of the smallest and largest |beta_j|, lowest index on ties.
std::pair<Eigen::Index, Eigen::Index> extreme_coordinates(const Coefficients& beta);

/// One experiment: simulate, fit, bootstrap, and score both methods.
/// Experiment e uses the ("experiment", e) child of the master stream, with
/// children "data", "smooth" and "boot" below it.
struct ExperimentResult {
  bool ok = false;
  int redraws = 0;
  int failed_replicates = 0;
  ExperimentCoverage pebble;
  ExperimentCoverage normal;
};

ExperimentResult run_experiment(const Scenario& scn, int experiment_index);

/// Runs all experiments (in parallel over experiments) and aggregates in
/// index order. Failed experiments are dropped and counted; more than 5%
/// failures raises TooManyFailures.
CoverageReport run_coverage_study(const Scenario& scn);

}  // namespace pebble
