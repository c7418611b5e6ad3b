#include "pebble/model.hpp"

#include <cmath>

#include "pebble/errors.hpp"

namespace pebble {

Dataset::Dataset(Matrix x, Vector y, std::vector<std::string> names)
    : x_(std::move(x)), y_(std::move(y)), names_(std::move(names)) {
  const auto n = x_.rows();
  const auto p = x_.cols();
  if (p < 1) fail(ErrorKind::InvalidData, "design matrix has no columns");
  if (y_.size() != n) {
    fail(ErrorKind::InvalidData, "response length " + std::to_string(y_.size()) +
                                     " does not match " + std::to_string(n) + " rows");
  }
  if (n < p + 1) {
    fail(ErrorKind::InvalidData, "need n >= p + 1, got n=" + std::to_string(n) +
                                     " p=" + std::to_string(p));
  }
  if (!x_.allFinite()) fail(ErrorKind::InvalidData, "design matrix has non-finite entries");
  Eigen::Index ones = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y_[i] != 0.0 && y_[i] != 1.0) {
      fail(ErrorKind::InvalidData, "response entry " + std::to_string(i) + " is not 0/1");
    }
    if (y_[i] == 1.0) ++ones;
  }
  if (ones == 0 || ones == n) {
    fail(ErrorKind::DegenerateResponse, "response is constant");
  }
  if (!names_.empty() && static_cast<Eigen::Index>(names_.size()) != p) {
    fail(ErrorKind::InvalidData, "column name count does not match design width");
  }
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log1p_exp(double z) noexcept {
  if (z >= 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double predict_prob(const Coefficients& beta, const Vector& x_row) {
  return sigmoid(x_row.dot(beta));
}

Vector fitted_probs(const Coefficients& beta, const Matrix& x) {
  return (x * beta).unaryExpr([](double z) { return sigmoid(z); });
}

double log_likelihood(const Coefficients& beta, const Dataset& data) {
  const Vector eta = data.x() * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    ll += data.y()[i] * eta[i] - log1p_exp(eta[i]);
  }
  return ll;
}

Vector score(const Coefficients& beta, const Dataset& data) {
  return data.x().transpose() * (data.y() - fitted_probs(beta, data.x()));
}

SymMatrix weighted_gram(const Matrix& x, const Vector& w) {
  const double n = static_cast<double>(x.rows());
  return SymMatrix(x.transpose() * w.asDiagonal() * x / n);
}

SymMatrix info_matrix(const Coefficients& beta, const Matrix& x) {
  const Vector prob = fitted_probs(beta, x);
  return weighted_gram(x, prob.array() * (1.0 - prob.array()));
}

SymMatrix info_matrix(const Coefficients& beta, const Dataset& data) {
  return info_matrix(beta, data.x());
}

SymMatrix sandwich_mid(const Coefficients& beta_hat, const Dataset& data) {
  const Vector resid = data.y() - fitted_probs(beta_hat, data.x());
  return weighted_gram(data.x(), resid.array().square());
}

}  // namespace pebble
