#pragma once

#include <string>
#include <vector>

#include "pebble/matrix.hpp"

namespace pebble {

using Coefficients = Vector;

/// Binary-response design: rows of x are covariate vectors, y holds 0/1.
/// No intercept is implied; callers add a constant column when they want one.
class Dataset {
 public:
  Dataset(Matrix x, Vector y, std::vector<std::string> names = {});

  Eigen::Index n() const noexcept { return x_.rows(); }
  Eigen::Index p() const noexcept { return x_.cols(); }
  const Matrix& x() const noexcept { return x_; }
  const Vector& y() const noexcept { return y_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  Matrix x_;
  Vector y_;
  std::vector<std::string> names_;
};

/// Logistic function, evaluated without overflow for any finite z.
double sigmoid(double z) noexcept;
/// log(1 + e^z) without overflow.
double log1p_exp(double z) noexcept;

double predict_prob(const Coefficients& beta, const Vector& x_row);
/// p(beta | x_i) for every row.
Vector fitted_probs(const Coefficients& beta, const Matrix& x);

double log_likelihood(const Coefficients& beta, const Dataset& data);
/// Sum_i (y_i - p_i) x_i.
Vector score(const Coefficients& beta, const Dataset& data);

/// n^{-1} Sum_i w_i x_i x_i'.
SymMatrix weighted_gram(const Matrix& x, const Vector& w);

/// Information matrix n^{-1} Sum_i x_i x_i' p_i (1 - p_i).
SymMatrix info_matrix(const Coefficients& beta, const Dataset& data);
SymMatrix info_matrix(const Coefficients& beta, const Matrix& x);

/// Sandwich middle matrix n^{-1} Sum_i (y_i - p_i)^2 x_i x_i'.
SymMatrix sandwich_mid(const Coefficients& beta_hat, const Dataset& data);

}  // namespace pebble
