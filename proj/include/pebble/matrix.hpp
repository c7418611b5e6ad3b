#pragma once

#include <Eigen/Dense>

#include "pebble/rng.hpp"

namespace pebble {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric matrix. Construction symmetrizes as (a + a')/2, so mirrored
/// entries are always bitwise equal.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& a);

  static SymMatrix identity(Eigen::Index dim);
  static SymMatrix diagonal(const Vector& d);
  static SymMatrix zero(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

/// Relative eigenvalue floor: 1e-12 times the largest eigenvalue (or 1 when
/// none is positive). Eigenvalues at or below it make a matrix singular.
double eigen_floor(const Vector& eigenvalues);

SymMatrix sym_inverse(const SymMatrix& a);
SymMatrix sym_inv_sqrt(const SymMatrix& a);
SymMatrix sym_sqrt(const SymMatrix& a);
/// Lower-triangular L with L L' = a.
Matrix cholesky_lower(const SymMatrix& a);

/// Independent N(0, d_j) draws, one per entry of d.
Vector mvn_diag_sample(RandomStream& rng, const Vector& d);

}  // namespace pebble
