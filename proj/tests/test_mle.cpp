#include <cmath>

#include "doctest.h"
#include "pebble/errors.hpp"
#include "pebble/mle.hpp"
#include "test_support.hpp"

using namespace pebble;
using pebble::testing::random_dataset;

namespace {

Dataset constant_design(const Vector& y) {
  return Dataset(Matrix::Ones(y.size(), 1), y);
}

// Brute-force maximizer of the p = 1 log-likelihood: grid over [-10, 10] with
// step 1e-4, then a finer grid around the best point.
double grid_argmax(const Dataset& d) {
  auto ll = [&](double b) { return log_likelihood(Vector{{b}}, d); };
  double best = -10.0, best_val = ll(best);
  for (int k = 1; k <= 200000; ++k) {
    const double b = -10.0 + 1e-4 * k;
    const double v = ll(b);
    if (v > best_val) {
      best_val = v;
      best = b;
    }
  }
  const double centre = best;
  for (int k = -1000; k <= 1000; ++k) {
    const double b = centre + 1e-7 * k;
    const double v = ll(b);
    if (v > best_val) {
      best_val = v;
      best = b;
    }
  }
  return best;
}

// Root of the monotone map t -> offset + sum_i (p_anchor_i - p(t x_i)) x_i by bisection.
double bisect_weighted(const Dataset& d, double anchor, double offset) {
  auto f = [&](double t) {
    double s = offset;
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      const double xi = d.x()(i, 0);
      s += (sigmoid(anchor * xi) - sigmoid(t * xi)) * xi;
    }
    return s;
  };
  double lo = -50.0, hi = 50.0;  // f decreasing in t
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("mle") {
  TEST_CASE("closed-form intercept-only fits") {
    const FittedModel f = fit_mle(constant_design(Vector{{1.0, 1.0, 1.0, 0.0}}));
    CHECK(f.beta_hat[0] == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    CHECK(f.final_score_norm <= 1e-10);

    const FittedModel balanced = fit_mle(constant_design(Vector{{1.0, 0.0}}));
    CHECK(balanced.beta_hat[0] == 0.0);
    CHECK(balanced.iterations == 0);
  }

  TEST_CASE("fitted model is fully populated") {
    RandomStream rng(10);
    const Dataset d = random_dataset(rng, 60, 3);
    const FittedModel f = fit_mle(d);
    CHECK((score(f.beta_hat, d) / 60.0).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(f.l_hat.dim() == 3);
    CHECK(f.m_hat.dim() == 3);
    const Matrix expected = f.l_hat_inv.matrix() * f.m_hat.matrix() * f.l_hat_inv.matrix();
    CHECK((f.sigma_hat.matrix() - expected).cwiseAbs().maxCoeff() <= 1e-12);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(f.sigma_hat.matrix());
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }

  TEST_CASE("property: monotone ascent along the Newton path") {
    RandomStream rng(12);
    for (int trial = 0; trial < 20; ++trial) {
      const Dataset d = random_dataset(rng, 40, 1 + trial % 4, 1.5);
      try {
        const FittedModel f = fit_mle(d);
        for (std::size_t k = 1; k < f.loglik_path.size(); ++k) {
          const double prev = f.loglik_path[k - 1];
          CHECK(f.loglik_path[k] >= prev - 1e-12 * (1.0 + std::abs(prev)));
        }
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Separation);
      }
    }
  }

  TEST_CASE("property: grid-search oracle agreement for p = 1") {
    RandomStream rng(20);
    int checked = 0;
    while (checked < 20) {
      const Eigen::Index n = 6 + checked % 10;
      const Dataset d = random_dataset(rng, n, 1, 1.0);
      FittedModel f;
      try {
        f = fit_mle(d);
      } catch (const Error&) {
        continue;  // separated sample
      }
      if (std::abs(f.beta_hat[0]) > 9.0) continue;
      CAPTURE(checked);
      CHECK(std::abs(f.beta_hat[0] - grid_argmax(d)) <= 1e-3);
      ++checked;
    }
  }

  TEST_CASE("determinism and column-scaling equivariance") {
    RandomStream rng(21);
    const Dataset d = random_dataset(rng, 80, 3);
    const FittedModel a = fit_mle(d);
    const FittedModel b = fit_mle(d);
    CHECK((a.beta_hat.array() == b.beta_hat.array()).all());

    for (double c : {0.1, 3.0, 250.0}) {
      Matrix x = d.x();
      x.col(1) *= c;
      const FittedModel s = fit_mle(Dataset(x, d.y()));
      CHECK(pebble::testing::rel_err(s.beta_hat[1] * c, a.beta_hat[1]) <= 1e-8);
      CHECK(pebble::testing::rel_err(s.beta_hat[0], a.beta_hat[0]) <= 1e-8);
    }
  }

  TEST_CASE("separation is reported") {
    Matrix x(6, 1);
    x << -3, -2, -1, 1, 2, 3;
    const Dataset d(x, Vector{{0, 0, 0, 1, 1, 1}});
    try {
      fit_mle(d);
      FAIL("expected Separation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Separation);
    }
  }

  TEST_CASE("solver options are validated") {
    const Dataset d = constant_design(Vector{{1.0, 0.0}});
    SolverOptions bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(fit_mle(d, bad), Error);
    bad = {};
    bad.max_iter = 0;
    CHECK_THROWS_AS(fit_mle(d, bad), Error);
  }

  TEST_CASE("fit_weighted_equation") {
    RandomStream rng(30);
    const Dataset d = random_dataset(rng, 50, 2);
    const FittedModel f = fit_mle(d);
    const Coefficients same = fit_weighted_equation(d, f.beta_hat, Vector::Zero(2));
    CHECK((same.array() == f.beta_hat.array()).all());

    Vector offset{{0.8, -1.1}};
    const Coefficients t = fit_weighted_equation(d, f.beta_hat, offset);
    const Vector resid =
        offset + d.x().transpose() * (fitted_probs(f.beta_hat, d.x()) - fitted_probs(t, d.x()));
    CHECK(resid.cwiseAbs().maxCoeff() / 50.0 <= 1e-10);

    CHECK_THROWS_AS(fit_weighted_equation(d, f.beta_hat, Vector::Zero(3)), Error);
  }

  TEST_CASE("fit_weighted_equation matches bisection for p = 1") {
    RandomStream rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      const Dataset d = random_dataset(rng, 25, 1);
      const double anchor = 0.3 * rng.next_gaussian();
      const double offset = 2.0 * rng.next_gaussian();
      const Coefficients t = fit_weighted_equation(d, Vector{{anchor}}, Vector{{offset}});
      CHECK(std::abs(t[0] - bisect_weighted(d, anchor, offset)) <= 1e-8);
    }
  }
}
