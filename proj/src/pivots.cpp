#include "pebble/pivots.hpp"

#include <algorithm>
#include <cmath>

#include "pebble/errors.hpp"

namespace pebble {
namespace {

PivotBundle assemble(const SymMatrix& l, const SymMatrix& l_inv, const SymMatrix& m,
                     const SymMatrix& sigma, const Vector& delta, double sqrt_n, double b_n,
                     const Vector& z) {
  const SymMatrix m_inv_sqrt = sym_inv_sqrt(m);
  PivotBundle out;
  out.h_check = m_inv_sqrt.matrix() * (sqrt_n * (l.matrix() * delta) + b_n * z);
  out.h_norm = out.h_check.norm();
  const Vector shift = l_inv.matrix() * z;
  out.coord_pivots.resize(delta.size());
  for (Eigen::Index j = 0; j < delta.size(); ++j) {
    const double s = sigma(j, j);
    if (!(s > 0.0)) fail(ErrorKind::SingularMatrix, "sandwich variance has a zero diagonal");
    out.coord_pivots[j] = (sqrt_n * delta[j] + b_n * shift[j]) / std::sqrt(s);
  }
  return out;
}

}  // namespace

void SmoothingConfig::validate(Eigen::Index p) const {
  if (!(b_n >= 0.0) || !std::isfinite(b_n)) {
    fail(ErrorKind::Precondition, "b_n must be finite and non-negative");
  }
  if (d_var.size() != p || z_original.size() != p) {
    fail(ErrorKind::Precondition, "smoothing config dimension does not match p");
  }
  if (!(d_var.array() > 0.0).all()) {
    fail(ErrorKind::NonPositiveVariance, "smoothing variances must be positive");
  }
}

double default_bn(Eigen::Index n, Eigen::Index p) {
  if (n < 2 || p < 1) fail(ErrorKind::Precondition, "default_bn needs n >= 2 and p >= 1");
  const double p1 = static_cast<double>(std::max<Eigen::Index>(p + 1, 4));
  return std::pow(static_cast<double>(n), -1.0 / (2.0 * (p1 + 1.0)));
}

Vector default_dvar(Eigen::Index p) { return Vector::Constant(p, 0.25); }

SmoothingConfig make_smoothing_config(Eigen::Index n, Eigen::Index p, RandomStream& rng,
                                      std::optional<double> b_n, std::optional<Vector> d_var) {
  SmoothingConfig cfg;
  cfg.b_n = b_n ? *b_n : default_bn(n, p);
  cfg.d_var = d_var ? std::move(*d_var) : default_dvar(p);
  if (cfg.d_var.size() != p) {
    fail(ErrorKind::Precondition, "d_var length does not match p");
  }
  cfg.z_original = mvn_diag_sample(rng, cfg.d_var);
  cfg.validate(p);
  return cfg;
}

Vector pivot_normal(const FittedModel& fitted, const Coefficients& beta0, Eigen::Index n) {
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  return sqrt_n * (sym_sqrt(fitted.l_hat).matrix() * (fitted.beta_hat - beta0));
}

PivotBundle pivot_smoothed(const FittedModel& fitted, const Coefficients& beta0, Eigen::Index n,
                           const SmoothingConfig& cfg) {
  cfg.validate(fitted.beta_hat.size());
  return assemble(fitted.l_hat, fitted.l_hat_inv, fitted.m_hat, fitted.sigma_hat,
                  fitted.beta_hat - beta0, std::sqrt(static_cast<double>(n)), cfg.b_n,
                  cfg.z_original);
}

PivotBundle pivot_smoothed_star(const Dataset& data, const FittedModel& fitted,
                                const BootstrapReplicate& rep, const Vector& weights, double mu,
                                const SmoothingConfig& cfg, const Vector& z_star) {
  if (weights.size() != data.n()) {
    fail(ErrorKind::Precondition, "weight vector length does not match n");
  }
  if (z_star.size() != data.p()) {
    fail(ErrorKind::Precondition, "z_star length does not match p");
  }
  const SymMatrix l_star = info_matrix(rep.beta_star, data);
  const Vector resid = data.y() - fitted_probs(fitted.beta_hat, data.x());
  const Vector m_weights =
      resid.array().square() * ((weights.array() - mu) / mu).square();
  const SymMatrix m_star = weighted_gram(data.x(), m_weights);
  const SymMatrix l_star_inv = sym_inverse(l_star);
  const SymMatrix sigma_star(l_star_inv.matrix() * m_star.matrix() * l_star_inv.matrix());
  return assemble(l_star, l_star_inv, m_star, sigma_star, rep.beta_star - fitted.beta_hat,
                  std::sqrt(static_cast<double>(data.n())), cfg.b_n, z_star);
}

Vector smoothing_correction(const FittedModel& fitted, const SmoothingConfig& cfg) {
  const Vector shift = fitted.l_hat_inv.matrix() * cfg.z_original;
  Vector out(shift.size());
  for (Eigen::Index j = 0; j < shift.size(); ++j) {
    out[j] = cfg.b_n * shift[j] / std::sqrt(fitted.sigma_hat(j, j));
  }
  return out;
}

}  // namespace pebble
