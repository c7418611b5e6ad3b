#pragma once

#include <optional>

#include "pebble/mle.hpp"
#include "pebble/perturbation.hpp"

namespace pebble {

/// Smoothing scale b_n, the diagonal covariance D of the smoothing draws, and
/// the realized original-side draw Z. Z is kept because interval endpoints
/// reuse it.
struct SmoothingConfig {
  double b_n = 0.0;
  Vector d_var;
  Vector z_original;

  void validate(Eigen::Index p) const;
};

/// b_n = n^{-1/(2(p1+1))} with p1 = max(p+1, 4).
double default_bn(Eigen::Index n, Eigen::Index p);

/// Default diagonal smoothing variance, 0.25 on every coordinate.
Vector default_dvar(Eigen::Index p);

/// Builds a config, drawing Z ~ N(0, diag(d_var)) from rng. Unset overrides
/// fall back to default_bn / default_dvar.
SmoothingConfig make_smoothing_config(Eigen::Index n, Eigen::Index p, RandomStream& rng,
                                      std::optional<double> b_n = std::nullopt,
                                      std::optional<Vector> d_var = std::nullopt);

struct PivotBundle {
  Vector h_check;       ///< smoothed vector pivot
  double h_norm = 0.0;  ///< Euclidean norm of h_check
  Vector coord_pivots;  ///< per-coordinate smoothed pivots
};

/// sqrt(n) L_hat^{1/2} (beta_hat - beta0).
Vector pivot_normal(const FittedModel& fitted, const Coefficients& beta0, Eigen::Index n);

/// Smoothed pivot on the original data, using the stored Z.
///   vector:   sqrt(n) M^{-1/2} L (beta_hat - beta0) + b_n M^{-1/2} Z
///   coord j:  (sqrt(n)(beta_hat_j - beta0_j) + b_n (L^{-1} Z)_j) / sqrt(Sigma_jj)
PivotBundle pivot_smoothed(const FittedModel& fitted, const Coefficients& beta0, Eigen::Index n,
                           const SmoothingConfig& cfg);

/// Same construction on the bootstrap side: L*, M* and Sigma* are evaluated
/// at beta_star with the replicate's weights, and beta_hat plays the role of
/// the true parameter. Throws SingularMatrix if M* degenerates.
PivotBundle pivot_smoothed_star(const Dataset& data, const FittedModel& fitted,
                                const BootstrapReplicate& rep, const Vector& weights, double mu,
                                const SmoothingConfig& cfg, const Vector& z_star);

/// Offset b_n Sigma_jj^{-1/2} (L^{-1} Z)_j that each coordinate interval
/// endpoint subtracts from its bootstrap quantile.
Vector smoothing_correction(const FittedModel& fitted, const SmoothingConfig& cfg);

}  // namespace pebble
