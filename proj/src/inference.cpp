#include "pebble/inference.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "pebble/errors.hpp"
#include "pebble/parallel.hpp"

namespace pebble {
namespace {

struct ReplicateOutcome {
  std::optional<PivotBundle> pivot;
  Coefficients beta_star;
};

ReplicateOutcome draw_replicate(const Dataset& data, const FittedModel& fitted,
                                const SmoothingConfig& cfg, RandomStream rs,
                                const BootstrapOptions& opts) {
  ReplicateOutcome out;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const Vector weights = sample_weights(rs, data.n(), opts.weights);
    const Vector z_star = mvn_diag_sample(rs, cfg.d_var);
    try {
      BootstrapReplicate rep = solve_bootstrap(data, fitted, weights, opts.weights.mu, opts.solver);
      out.pivot = pivot_smoothed_star(data, fitted, rep, weights, opts.weights.mu, cfg, z_star);
      out.beta_star = std::move(rep.beta_star);
      return out;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Separation && e.kind() != ErrorKind::SingularMatrix) throw;
    }
  }
  return out;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::Precondition, "alpha must lie in (0, 1)");
}

}  // namespace

std::vector<double> BootstrapEnsemble::coord_samples(Eigen::Index j) const {
  std::vector<double> out;
  out.reserve(pivots.size());
  for (const auto& b : pivots) out.push_back(b.coord_pivots[j]);
  return out;
}

std::vector<double> BootstrapEnsemble::norm_samples() const {
  std::vector<double> out;
  out.reserve(pivots.size());
  for (const auto& b : pivots) out.push_back(b.h_norm);
  return out;
}

BootstrapEnsemble run_pebble(const Dataset& data, const FittedModel& fitted, int B,
                             const SmoothingConfig& cfg, const RandomStream& stream,
                             const BootstrapOptions& opts) {
  if (B < kMinBootstrap) {
    fail(ErrorKind::Precondition,
         "bootstrap size " + std::to_string(B) + " is below the minimum of " +
             std::to_string(kMinBootstrap));
  }
  cfg.validate(data.p());

  std::vector<ReplicateOutcome> slots(static_cast<std::size_t>(B));
  parallel_for(slots.size(), opts.threads, [&](std::size_t r) {
    slots[r] = draw_replicate(data, fitted, cfg, stream.derive("boot", r), opts);
  });

  BootstrapEnsemble ens;
  ens.requested = B;
  ens.seed = stream.seed();
  ens.stream_path = stream.path_string();
  ens.smoothing = cfg;
  ens.pivots.reserve(slots.size());
  ens.beta_star.reserve(slots.size());
  for (auto& s : slots) {
    if (!s.pivot) {
      ++ens.failed_replicates;
      continue;
    }
    ens.pivots.push_back(std::move(*s.pivot));
    ens.beta_star.push_back(std::move(s.beta_star));
  }
  if (static_cast<double>(ens.failed_replicates) >= kMaxFailureRate * B) {
    fail(ErrorKind::TooManyFailures, std::to_string(ens.failed_replicates) + " of " +
                                         std::to_string(B) + " bootstrap replicates failed");
  }
  return ens;
}

std::size_t nearest_rank(std::size_t count, double alpha) {
  // The small slack keeps products such as 100 * 0.9 from rounding up a rank.
  const double scaled = static_cast<double>(count) * alpha;
  const double rank = std::ceil(scaled - 1e-9 * std::max(1.0, scaled));
  return static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(count)));
}

double quantile(std::vector<double> samples, double alpha) {
  if (samples.empty()) fail(ErrorKind::EmptySample, "quantile of an empty sample");
  check_alpha(alpha);
  const std::size_t k = nearest_rank(samples.size(), alpha) - 1;
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(k),
                   samples.end());
  return samples[k];
}

CoordInterval coordinate_interval(double beta_j, double sigma_jj, Eigen::Index n, double q_lo,
                                  double q_hi, double correction) {
  const double scale = std::sqrt(sigma_jj / static_cast<double>(n));
  CoordInterval ci;
  ci.lo = beta_j - scale * (q_hi - correction);
  ci.hi = beta_j - scale * (q_lo - correction);
  return ci;
}

IntervalSet make_intervals(const FittedModel& fitted, const BootstrapEnsemble& ensemble,
                           double alpha, const SmoothingConfig& cfg, Eigen::Index n) {
  check_alpha(alpha);
  if (ensemble.size() == 0) fail(ErrorKind::EmptySample, "bootstrap ensemble is empty");
  const Vector corr = smoothing_correction(fitted, cfg);
  const auto p = fitted.beta_hat.size();

  IntervalSet out;
  out.alpha = alpha;
  out.coords.reserve(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto samples = ensemble.coord_samples(j);
    const double beta_j = fitted.beta_hat[j];
    const double sigma_jj = fitted.sigma_hat(j, j);
    CoordInterval ci = coordinate_interval(beta_j, sigma_jj, n, quantile(samples, alpha / 2.0),
                                           quantile(samples, 1.0 - alpha / 2.0), corr[j]);
    const CoordInterval one_sided = coordinate_interval(
        beta_j, sigma_jj, n, quantile(samples, alpha), quantile(samples, 1.0 - alpha), corr[j]);
    ci.upper = one_sided.hi;
    ci.lower = one_sided.lo;
    if (!(ci.lo <= ci.hi)) fail(ErrorKind::SingularMatrix, "interval endpoints out of order");
    out.coords.push_back(ci);
  }
  out.region_radius = quantile(ensemble.norm_samples(), 1.0 - alpha);
  return out;
}

bool region_contains(const Coefficients& beta0, const FittedModel& fitted,
                     const BootstrapEnsemble& ensemble, double alpha, const SmoothingConfig& cfg,
                     Eigen::Index n) {
  const double radius = quantile(ensemble.norm_samples(), 1.0 - alpha);
  return pivot_smoothed(fitted, beta0, n, cfg).h_norm <= radius;
}

double normal_quantile(double prob) {
  check_alpha(prob);
  return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), prob);
}

double chi2_quantile(double dof, double prob) {
  check_alpha(prob);
  if (!(dof > 0.0)) fail(ErrorKind::Precondition, "chi-square dof must be positive");
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), prob);
}

IntervalSet normal_intervals(const FittedModel& fitted, double alpha, Eigen::Index n) {
  check_alpha(alpha);
  const auto p = fitted.beta_hat.size();
  const double z_two = normal_quantile(1.0 - alpha / 2.0);
  const double z_one = normal_quantile(1.0 - alpha);
  IntervalSet out;
  out.alpha = alpha;
  out.coords.reserve(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double se = std::sqrt(fitted.l_hat_inv(j, j) / static_cast<double>(n));
    const double b = fitted.beta_hat[j];
    CoordInterval ci;
    ci.lo = b - z_two * se;
    ci.hi = b + z_two * se;
    ci.upper = b + z_one * se;
    ci.lower = b - z_one * se;
    out.coords.push_back(ci);
  }
  out.region_radius = std::sqrt(chi2_quantile(static_cast<double>(p), 1.0 - alpha));
  return out;
}

bool normal_region_contains(const Coefficients& beta0, const FittedModel& fitted, double alpha,
                            Eigen::Index n) {
  const double radius =
      std::sqrt(chi2_quantile(static_cast<double>(fitted.beta_hat.size()), 1.0 - alpha));
  return pivot_normal(fitted, beta0, n).norm() <= radius;
}

}  // namespace pebble
