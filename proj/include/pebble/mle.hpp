#pragma once

#include <vector>

#include "pebble/model.hpp"

namespace pebble {

struct SolverOptions {
  /// Convergence threshold on the sup-norm of the mean score.
  double tol = 1e-10;
  int max_iter = 100;
  /// Iterates with sup-norm beyond this are treated as diverging.
  double divergence_norm = 1e4;

  void validate() const;
};

/// Maximum-likelihood fit together with the matrices every pivot needs.
struct FittedModel {
  Coefficients beta_hat;
  SymMatrix l_hat;      ///< information matrix at beta_hat
  SymMatrix l_hat_inv;
  SymMatrix m_hat;      ///< sandwich middle matrix at beta_hat
  SymMatrix sigma_hat;  ///< l_hat^{-1} m_hat l_hat^{-1}
  int iterations = 0;
  double final_score_norm = 0.0;
  /// Objective value after each accepted Newton step, starting at beta = 0.
  std::vector<double> loglik_path;
};

/// Result of the shared damped-Newton kernel.
struct NewtonResult {
  Coefficients t;
  int iterations = 0;
  double final_score_norm = 0.0;
  std::vector<double> objective_path;
};

/// Maximizes c't - Sum_i log(1 + exp(x_i't)), whose gradient is
/// c - Sum_i p(t|x_i) x_i. Newton steps are halved (up to 30 times) whenever
/// the objective would drop. Throws Separation on divergence, a singular
/// Hessian, or exhausting max_iter.
NewtonResult newton_logistic(const Matrix& x, const Vector& c, Coefficients start,
                             const SolverOptions& opts, bool record_path = false);

FittedModel fit_mle(const Dataset& data, const SolverOptions& opts = {});

/// Solves offset + Sum_i (p(anchor|x_i) - p(t|x_i)) x_i = 0 for t, starting
/// Newton at the anchor. The anchor also fixes the reference probabilities.
Coefficients fit_weighted_equation(const Dataset& data, const Coefficients& beta_anchor,
                                   const Vector& offset, const SolverOptions& opts = {});

}  // namespace pebble
