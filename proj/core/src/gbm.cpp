// -----------------------------------------------------------------------------
// gbm.cpp
// -----------------------------------------------------------------------------

#include "lobcal/gbm.hpp"

#include <cmath>

#include "lobcal/errors.hpp"

namespace lobcal {

GbmMoments gbm_moments(const GbmParams& params, double s0, double t) {
  if (s0 <= 0 || t < 0 || params.sigma <= 0)
    throw Error(ErrorKind::domain, "gbm_moments needs s0 > 0, t >= 0, sigma > 0");
  GbmMoments m;
  const double growth = std::exp(params.mu * t);
  m.mean = s0 * growth;
  m.var = s0 * s0 * growth * growth * (std::exp(params.sigma * params.sigma * t) - 1.0);
  return m;
}

double bm_hitting_laplace(double mu_hat, double z, double r) {
  if (r < 0 || !std::isfinite(mu_hat) || !std::isfinite(z))
    throw Error(ErrorKind::domain, "hitting transform needs r >= 0 and finite inputs");
  if (z == 0.0) return 1.0;
  // Exponent is <= 0 for every (mu_hat, z, r): |mu_hat z| <= |z| sqrt(2r + mu_hat^2).
  // With mu_hat z > 0 the direct difference cancels catastrophically for
  // |mu_hat z| >> r z^2 / |mu_hat z| (drift toward the barrier, small
  // volatility); the conjugate form is the same quantity exactly and adds
  // only same-signed terms. With mu_hat z <= 0 the direct form is the stable
  // one (again same-signed terms).
  const double root = std::abs(z) * std::sqrt(2.0 * r + mu_hat * mu_hat);
  const double exponent = mu_hat * z > 0.0
                              ? -2.0 * r * z * z / (mu_hat * z + root)
                              : mu_hat * z - root;
  return std::exp(exponent);
}

namespace {

void check_spec(const HittingSpec& spec) {
  if (spec.s0 <= 0)
    throw Error(ErrorKind::domain, "reference price must be positive");
  if (spec.s0 + spec.d <= 0)
    throw Error(ErrorKind::domain, "order level must stay positive (|d| < s0 on the bid side)");
}

}  // namespace

double gbm_utility(const GbmParams& params, const HittingSpec& spec, double r) {
  check_spec(spec);
  if (params.sigma <= 0)
    throw Error(ErrorKind::domain, "sigma must be positive");
  if (spec.d == 0.0) return 0.0;
  const double z = std::log((spec.s0 + spec.d) / spec.s0) / params.sigma;
  const double mu_hat = (params.mu - 0.5 * params.sigma * params.sigma) / params.sigma;
  return std::abs(spec.d) * bm_hitting_laplace(mu_hat, z, r);
}

double implied_sigma(const HittingSpec& spec, double r, double c, double nu) {
  check_spec(spec);
  if (r <= 0) throw Error(ErrorKind::domain, "implied volatility needs r > 0");
  const double ad = std::abs(spec.d);
  if (!(c > 0.0) || c >= ad)
    throw Error(ErrorKind::domain, "target utility must satisfy 0 < c < |d|");

  const double w = std::log((spec.s0 + spec.d) / spec.s0);
  // Utility as a function of sigma with the log drift nu held fixed; monotone
  // increasing in sigma (see header).
  const auto utility = [&](double sigma) {
    return ad * bm_hitting_laplace(nu / sigma, w / sigma, r);
  };

  double lo = 1e-8;
  if (utility(lo) > c)
    throw Error(ErrorKind::domain,
                "target utility lies below the small-volatility limit");
  double hi = 0.5;
  int doublings = 0;
  while (utility(hi) < c) {
    hi *= 2.0;
    if (++doublings > 60)
      throw Error(ErrorKind::solver, "no volatility bracket within 60 doublings");
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    (utility(mid) < c ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace lobcal
