#pragma once

#include <cmath>
#include <cstdint>

#include "pebble/model.hpp"
#include "pebble/rng.hpp"

namespace pebble::testing {

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Random SPD matrix U diag(lambda) U' with eigenvalues spread over
/// [1, cond] and a random orthogonal U.
inline Matrix random_spd(RandomStream& rng, Eigen::Index dim, double cond = 100.0) {
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.next_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ();
  Vector lambda(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double t = dim == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(dim - 1);
    lambda[i] = std::pow(cond, t);
  }
  return q * lambda.asDiagonal() * q.transpose();
}

/// Logistic data with standard normal covariates; retried until the
/// response is non-constant.
inline Dataset random_dataset(RandomStream& rng, Eigen::Index n, Eigen::Index p,
                              double beta_scale = 0.7) {
  Vector beta(p);
  for (Eigen::Index j = 0; j < p; ++j) beta[j] = beta_scale * rng.next_gaussian();
  for (;;) {
    Matrix x(n, p);
    Vector y(n);
    Eigen::Index ones = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.next_gaussian();
      y[i] = rng.next_uniform() < sigmoid(x.row(i).dot(beta)) ? 1.0 : 0.0;
      ones += y[i] == 1.0;
    }
    if (ones > 0 && ones < n) return Dataset(std::move(x), std::move(y));
  }
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace pebble::testing
