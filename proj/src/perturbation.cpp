#include "pebble/perturbation.hpp"

#include <cmath>
#include <sstream>

#include "pebble/errors.hpp"

namespace pebble {

WeightSpec WeightSpec::custom(std::string name, double mu,
                              std::function<double(RandomStream&)> sampler) {
  if (!(mu > 0.0)) fail(ErrorKind::Precondition, "weight mean must be positive");
  WeightSpec spec;
  spec.name = std::move(name);
  spec.mu = mu;
  spec.sampler = std::move(sampler);
  return spec;
}

double sample_gamma(RandomStream& rng, double shape) {
  if (!(shape > 0.0)) fail(ErrorKind::Precondition, "gamma shape must be positive");
  if (shape < 1.0) {
    const double g = sample_gamma(rng, shape + 1.0);
    double u;
    do {
      u = rng.next_uniform();
    } while (u == 0.0);
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = rng.next_gaussian();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(RandomStream& rng, double a, double b) {
  const double ga = sample_gamma(rng, a);
  const double gb = sample_gamma(rng, b);
  const double total = ga + gb;
  // Both gammas underflowing to zero is only reachable for tiny shapes.
  return total > 0.0 ? ga / total : 0.5;
}

Vector sample_weights(RandomStream& rng, Eigen::Index n, const WeightSpec& spec) {
  if (n < 1) fail(ErrorKind::Precondition, "weight count must be >= 1");
  Vector w(n);
  if (spec.sampler) {
    for (Eigen::Index i = 0; i < n; ++i) w[i] = spec.sampler(rng);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) w[i] = sample_beta(rng, spec.beta_a, spec.beta_b);
  }
  return w;
}

MomentCheck check_weight_moments(const WeightSpec& spec, RandomStream rng, std::size_t draws,
                                 double tol) {
  MomentCheck out;
  if (draws < 2) fail(ErrorKind::Precondition, "moment check needs at least two draws");
  const Vector w = sample_weights(rng, static_cast<Eigen::Index>(draws), spec);
  out.non_negative = (w.array() >= 0.0).all();
  out.mean = w.mean();
  const Eigen::ArrayXd centered = w.array() - out.mean;
  const double n = static_cast<double>(draws);
  out.variance = centered.square().sum() / (n - 1.0);
  out.third_central = centered.cube().sum() / n;

  const double mu = spec.mu;
  const bool mean_ok = std::abs(out.mean - mu) <= tol;
  const bool var_ok = std::abs(out.variance - mu * mu) <= tol;
  const bool third_ok = std::abs(out.third_central - mu * mu * mu) <= tol;
  out.conforms = out.non_negative && mean_ok && var_ok && third_ok;

  std::ostringstream msg;
  if (!out.non_negative) msg << "negative weights drawn; ";
  if (!mean_ok) msg << "mean " << out.mean << " vs " << mu << "; ";
  if (!var_ok) msg << "variance " << out.variance << " vs " << mu * mu << "; ";
  if (!third_ok) msg << "third central moment " << out.third_central << " vs " << mu * mu * mu;
  out.message = msg.str();
  return out;
}

Vector perturbation_offset(const Dataset& data, const Coefficients& beta_hat,
                           const Vector& weights, double mu) {
  if (weights.size() != data.n()) {
    fail(ErrorKind::Precondition, "weight vector length does not match n");
  }
  const Vector resid = data.y() - fitted_probs(beta_hat, data.x());
  const Vector scaled = resid.array() * (weights.array() - mu) / mu;
  return data.x().transpose() * scaled;
}

Vector bootstrap_score(const Coefficients& t, const Dataset& data, const Coefficients& beta_hat,
                       const Vector& weights, double mu) {
  const Vector drift = fitted_probs(beta_hat, data.x()) - fitted_probs(t, data.x());
  return perturbation_offset(data, beta_hat, weights, mu) + data.x().transpose() * drift;
}

BootstrapReplicate solve_bootstrap(const Dataset& data, const FittedModel& fitted,
                                   const Vector& weights, double mu, const SolverOptions& opts) {
  BootstrapReplicate rep;
  const Vector offset = perturbation_offset(data, fitted.beta_hat, weights, mu);
  rep.beta_star = fit_weighted_equation(data, fitted.beta_hat, offset, opts);
  const Eigen::ArrayXd rel = (weights.array() - mu) / mu;
  rep.weights_digest = {rel.sum(), rel.square().sum()};
  return rep;
}

}  // namespace pebble
