#include "pebble/matrix.hpp"

#include <cmath>
#include <string>

#include "pebble/errors.hpp"

namespace pebble {
namespace {

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

// Applies f to the spectrum of a positive-definite matrix.
template <typename F>
SymMatrix spectral_map(const SymMatrix& a, const char* op, F&& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  if (es.info() != Eigen::Success) {
    fail(ErrorKind::SingularMatrix, std::string(op) + ": eigendecomposition failed");
  }
  const Vector& lambda = es.eigenvalues();
  const double floor = eigen_floor(lambda);
  if (lambda.minCoeff() <= floor) {
    fail(ErrorKind::SingularMatrix,
         std::string(op) + ": smallest eigenvalue " + std::to_string(lambda.minCoeff()) +
             " is not above floor " + std::to_string(floor));
  }
  const Vector mapped = lambda.unaryExpr(f);
  const Matrix& u = es.eigenvectors();
  return SymMatrix(u * mapped.asDiagonal() * u.transpose());
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() != a.cols()) {
    fail(ErrorKind::Precondition, "SymMatrix requires a square matrix");
  }
  m_ = symmetrized(a);
}

SymMatrix SymMatrix::identity(Eigen::Index dim) {
  return SymMatrix(Matrix::Identity(dim, dim));
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
  return SymMatrix(Matrix(d.asDiagonal()));
}

SymMatrix SymMatrix::zero(Eigen::Index dim) { return SymMatrix(Matrix::Zero(dim, dim)); }

double eigen_floor(const Vector& eigenvalues) {
  const double top = eigenvalues.size() > 0 ? eigenvalues.maxCoeff() : 0.0;
  return 1e-12 * (top > 0.0 ? top : 1.0);
}

SymMatrix sym_inverse(const SymMatrix& a) {
  return spectral_map(a, "sym_inverse", [](double l) { return 1.0 / l; });
}

SymMatrix sym_inv_sqrt(const SymMatrix& a) {
  return spectral_map(a, "sym_inv_sqrt", [](double l) { return 1.0 / std::sqrt(l); });
}

SymMatrix sym_sqrt(const SymMatrix& a) {
  return spectral_map(a, "sym_sqrt", [](double l) { return std::sqrt(l); });
}

Matrix cholesky_lower(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  const Vector& lambda = es.eigenvalues();
  if (es.info() != Eigen::Success || lambda.minCoeff() <= eigen_floor(lambda)) {
    fail(ErrorKind::SingularMatrix, "cholesky_lower: matrix is not positive definite");
  }
  Eigen::LLT<Matrix> llt(a.matrix());
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::SingularMatrix, "cholesky_lower: factorization failed");
  }
  return llt.matrixL();
}

Vector mvn_diag_sample(RandomStream& rng, const Vector& d) {
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    if (!(d[j] > 0.0)) {
      fail(ErrorKind::NonPositiveVariance,
           "variance entry " + std::to_string(j) + " is not positive");
    }
  }
  Vector out(d.size());
  for (Eigen::Index j = 0; j < d.size(); ++j) out[j] = std::sqrt(d[j]) * rng.next_gaussian();
  return out;
}

}  // namespace pebble
