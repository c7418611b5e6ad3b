#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pebble/pivots.hpp"

namespace pebble {

constexpr int kMinBootstrap = 100;
/// Ensembles with this failed fraction or more are rejected.
constexpr double kMaxFailureRate = 0.01;

struct BootstrapOptions {
  WeightSpec weights;
  SolverOptions solver;
  unsigned threads = 1;
};

/// Surviving bootstrap replicates with their smoothed pivots.
struct BootstrapEnsemble {
  std::vector<PivotBundle> pivots;
  std::vector<Coefficients> beta_star;
  int requested = 0;
  int failed_replicates = 0;
  std::uint64_t seed = 0;
  std::string stream_path;
  SmoothingConfig smoothing;

  std::size_t size() const noexcept { return pivots.size(); }
  /// Coordinate-j pivot values in replicate order.
  std::vector<double> coord_samples(Eigen::Index j) const;
  std::vector<double> norm_samples() const;
};

/// Draws B replicates. Replicate r uses the child stream ("boot", r) of
/// `stream` for its weights and Z*, so the ensemble is a function of the
/// inputs alone, whatever the thread count. A replicate whose equation or
/// pivot fails is redrawn once from the same child stream; a second failure
/// drops it and counts it. Throws TooManyFailures at a 1% failure rate.
BootstrapEnsemble run_pebble(const Dataset& data, const FittedModel& fitted, int B,
                             const SmoothingConfig& cfg, const RandomStream& stream,
                             const BootstrapOptions& opts = {});

/// Nearest-rank quantile: the ceil(B alpha)-th order statistic, rank clamped
/// to [1, B].
double quantile(std::vector<double> samples, double alpha);
/// 1-based rank used by quantile().
std::size_t nearest_rank(std::size_t count, double alpha);

struct CoordInterval {
  double lo = 0.0;  ///< two-sided lower end
  double hi = 0.0;  ///< two-sided upper end
  double upper = std::numeric_limits<double>::infinity();   ///< (-inf, upper]
  double lower = -std::numeric_limits<double>::infinity();  ///< [lower, inf)

  double width() const noexcept { return hi - lo; }
  bool covers(double b) const noexcept { return lo <= b && b <= hi; }
  bool upper_covers(double b) const noexcept { return b <= upper; }
  bool lower_covers(double b) const noexcept { return b >= lower; }
};

struct IntervalSet {
  std::vector<CoordInterval> coords;
  double region_radius = 0.0;
  double alpha = 0.1;
};

/// Endpoint algebra for one coordinate: beta_j - sqrt(Sigma_jj) (q - c) / sqrt(n).
/// Returns the two-sided interval for quantiles (q_lo, q_hi).
CoordInterval coordinate_interval(double beta_j, double sigma_jj, Eigen::Index n, double q_lo,
                                  double q_hi, double correction);

IntervalSet make_intervals(const FittedModel& fitted, const BootstrapEnsemble& ensemble,
                           double alpha, const SmoothingConfig& cfg, Eigen::Index n);

bool region_contains(const Coefficients& beta0, const FittedModel& fitted,
                     const BootstrapEnsemble& ensemble, double alpha, const SmoothingConfig& cfg,
                     Eigen::Index n);

/// Standard normal quantile.
double normal_quantile(double prob);
/// Chi-square quantile with `dof` degrees of freedom.
double chi2_quantile(double dof, double prob);

/// Wald baseline from the information matrix: beta_j +- z se_j with
/// se_j^2 = (L^{-1})_jj / n, region radius sqrt(chi2_{p,1-alpha}).
IntervalSet normal_intervals(const FittedModel& fitted, double alpha, Eigen::Index n);

bool normal_region_contains(const Coefficients& beta0, const FittedModel& fitted, double alpha,
                            Eigen::Index n);

}  // namespace pebble
