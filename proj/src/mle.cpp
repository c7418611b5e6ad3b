#include "pebble/mle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pebble/errors.hpp"

namespace pebble {
namespace {

constexpr int kMaxHalvings = 30;
constexpr double kMaxFinalStep = 1e-3;

double objective(const Matrix& x, const Vector& c, const Coefficients& t) {
  const Vector eta = x * t;
  double total = c.dot(t);
  for (Eigen::Index i = 0; i < eta.size(); ++i) total -= log1p_exp(eta[i]);
  return total;
}

// Rounding slack when comparing objective values: near the optimum the true
// change is far below the resolution of a sum of n terms.
double slack(double value, Eigen::Index n) {
  return 64.0 * std::numeric_limits<double>::epsilon() *
         (std::abs(value) + static_cast<double>(n));
}

}  // namespace

void SolverOptions::validate() const {
  if (!(tol > 0.0)) fail(ErrorKind::Precondition, "solver tol must be positive");
  if (max_iter < 1) fail(ErrorKind::Precondition, "solver max_iter must be >= 1");
  if (!(divergence_norm > 0.0)) {
    fail(ErrorKind::Precondition, "solver divergence_norm must be positive");
  }
}

NewtonResult newton_logistic(const Matrix& x, const Vector& c, Coefficients t,
                             const SolverOptions& opts, bool record_path) {
  opts.validate();
  const auto n = x.rows();
  const double inv_n = 1.0 / static_cast<double>(n);

  NewtonResult out;
  double value = objective(x, c, t);
  if (record_path) out.objective_path.push_back(value);

  for (int iter = 0;; ++iter) {
    const Vector prob = fitted_probs(t, x);
    const Vector grad = c - x.transpose() * prob;
    const double score_norm = grad.cwiseAbs().maxCoeff() * inv_n;

    const Vector w = prob.array() * (1.0 - prob.array());
    const Matrix hessian = x.transpose() * w.asDiagonal() * x;
    Eigen::LLT<Matrix> llt(hessian);
    if (llt.info() != Eigen::Success) {
      fail(ErrorKind::Separation, "information matrix is singular");
    }
    const Vector step = llt.solve(grad);

    if (score_norm <= opts.tol) {
      // A vanishing score with a Newton step that is still large means the
      // information has collapsed along some direction: the objective is
      // flat because the data are (quasi-)separated, not because t is a root.
      if (!(step.cwiseAbs().maxCoeff() <= kMaxFinalStep)) {
        fail(ErrorKind::Separation, "information matrix is numerically singular at the "
                                    "solution; data are likely separated");
      }
      out.t = std::move(t);
      out.iterations = iter;
      out.final_score_norm = score_norm;
      return out;
    }
    if (iter >= opts.max_iter) {
      fail(ErrorKind::Separation, "Newton did not converge in " + std::to_string(opts.max_iter) +
                                      " iterations (mean score " + std::to_string(score_norm) +
                                      ")");
    }

    double scale = 1.0;
    Coefficients next = t + step;
    double next_value = objective(x, c, next);
    int halvings = 0;
    while (!(next_value >= value - slack(value, n)) && halvings < kMaxHalvings) {
      scale *= 0.5;
      next = t + scale * step;
      next_value = objective(x, c, next);
      ++halvings;
    }
    if (!(next_value >= value - slack(value, n))) {
      fail(ErrorKind::Separation, "step halving failed to increase the objective");
    }
    if (!next.allFinite() || next.cwiseAbs().maxCoeff() > opts.divergence_norm) {
      fail(ErrorKind::Separation, "coefficients diverged; data are likely separated");
    }
    t = std::move(next);
    value = next_value;
    if (record_path) out.objective_path.push_back(value);
  }
}

FittedModel fit_mle(const Dataset& data, const SolverOptions& opts) {
  const Vector c = data.x().transpose() * data.y();
  NewtonResult res =
      newton_logistic(data.x(), c, Coefficients::Zero(data.p()), opts, /*record_path=*/true);

  FittedModel fit;
  fit.beta_hat = std::move(res.t);
  fit.iterations = res.iterations;
  fit.final_score_norm = res.final_score_norm;
  fit.loglik_path = std::move(res.objective_path);
  fit.l_hat = info_matrix(fit.beta_hat, data);
  fit.m_hat = sandwich_mid(fit.beta_hat, data);
  fit.l_hat_inv = sym_inverse(fit.l_hat);
  fit.sigma_hat = SymMatrix(fit.l_hat_inv.matrix() * fit.m_hat.matrix() * fit.l_hat_inv.matrix());
  return fit;
}

Coefficients fit_weighted_equation(const Dataset& data, const Coefficients& beta_anchor,
                                   const Vector& offset, const SolverOptions& opts) {
  if (offset.size() != data.p() || !offset.allFinite()) {
    fail(ErrorKind::Precondition, "offset must be a finite vector of length p");
  }
  const Vector c = offset + data.x().transpose() * fitted_probs(beta_anchor, data.x());
  return newton_logistic(data.x(), c, beta_anchor, opts).t;
}

}  // namespace pebble
