#pragma once

#include <functional>
#include <string>
#include <utility>

#include "pebble/mle.hpp"
#include "pebble/rng.hpp"

namespace pebble {

/// Law of the perturbation weights G*. The weights must be non-negative and
/// non-degenerate with Var(G*) = mu^2 and E(G* - mu)^3 = mu^3. The default,
/// Beta(1/2, 3/2), has mu = 1/4.
struct WeightSpec {
  std::string name = "beta(0.5,1.5)";
  double beta_a = 0.5;
  double beta_b = 1.5;
  /// Population mean, supplied analytically.
  double mu = 0.25;
  /// Alternative law; when set it replaces the Beta sampler.
  std::function<double(RandomStream&)> sampler;

  static WeightSpec beta_default() { return {}; }
  static WeightSpec custom(std::string name, double mu,
                           std::function<double(RandomStream&)> sampler);
};

/// Monte Carlo check of the weight moment conditions.
struct MomentCheck {
  double mean = 0.0;
  double variance = 0.0;
  double third_central = 0.0;
  bool non_negative = true;
  /// Each moment within its tolerance of mu, mu^2, mu^3.
  bool conforms = false;
  std::string message;
};

MomentCheck check_weight_moments(const WeightSpec& spec, RandomStream rng, std::size_t draws,
                                 double tol = 0.002);

/// Marsaglia-Tsang gamma variate with unit scale; shapes below one use the
/// U^{1/shape} boost.
double sample_gamma(RandomStream& rng, double shape);
/// Beta(a, b) as G_a / (G_a + G_b).
double sample_beta(RandomStream& rng, double a, double b);

Vector sample_weights(RandomStream& rng, Eigen::Index n, const WeightSpec& spec = {});

/// Sum_i (y_i - p_hat_i) x_i (G_i - mu)/mu, the random part of the bootstrap
/// estimating equation.
Vector perturbation_offset(const Dataset& data, const Coefficients& beta_hat,
                           const Vector& weights, double mu);

/// Left-hand side of the bootstrap estimating equation evaluated at t.
Vector bootstrap_score(const Coefficients& t, const Dataset& data, const Coefficients& beta_hat,
                       const Vector& weights, double mu);

struct BootstrapReplicate {
  Coefficients beta_star;
  /// (sum, sum of squares) of (G_i - mu)/mu, kept for audit.
  std::pair<double, double> weights_digest{0.0, 0.0};
};

/// Solves the bootstrap equation for one weight vector, starting at beta_hat.
/// Throws Separation when the replicate has no finite root.
BootstrapReplicate solve_bootstrap(const Dataset& data, const FittedModel& fitted,
                                   const Vector& weights, double mu,
                                   const SolverOptions& opts = {});

}  // namespace pebble
