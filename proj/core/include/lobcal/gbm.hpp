#pragma once

namespace lobcal {

// -----------------------------------------------------------------------------
// Geometric Brownian motion: moments, first-passage transform, level utility
// -----------------------------------------------------------------------------
//
// For S_t = S exp((mu - sigma^2/2) t + sigma B_t) and a resting order at
// distance D from S (signed: ask > 0, bid < 0), the expected discounted
// fill value is
//
//   U_D(r) = |D| E[e^{-r tau}]
//          = |D| exp(mu_hat z - |z| sqrt(2 r + mu_hat^2)),
//
// with mu_hat = (mu - sigma^2/2)/sigma and z = log((S+D)/S)/sigma: the
// standard Laplace transform of the first time a unit-variance Brownian
// motion with drift mu_hat reaches level z.
// -----------------------------------------------------------------------------

struct GbmParams {
  double mu = 0.0;      // drift per time unit
  double sigma = 0.2;   // volatility per sqrt(time unit), > 0
};

// A resting order: reference price and signed distance in quote units.
struct HittingSpec {
  double s0 = 0.0;
  double d = 0.0;
};

struct GbmMoments {
  double mean = 0.0;
  double var = 0.0;
};

// E[S_t] = S e^{mu t}, Var[S_t] = S^2 e^{2 mu t} (e^{sigma^2 t} - 1).
GbmMoments gbm_moments(const GbmParams& params, double s0, double t);

// E[e^{-r tau_z}] for unit-variance Brownian motion with drift mu_hat first
// reaching level z (z = 0 returns 1). Requires r >= 0.
double bm_hitting_laplace(double mu_hat, double z, double r);

// |d| * E[e^{-r tau}]; raises Error(domain) when s0 <= 0, s0 + d <= 0 or
// sigma <= 0.
double gbm_utility(const GbmParams& params, const HittingSpec& spec, double r);

// Solves gbm_utility(sigma) = c for sigma with the log-drift nu = mu -
// sigma^2/2 held fixed (so mu_hat = nu/sigma varies with the candidate).
// The utility is monotone increasing in sigma; the root is bracketed by
// doubling and bisected to 1e-10 relative tolerance. Raises Error(domain)
// when c >= |d|, c <= 0, or c lies below the small-volatility limit;
// Error(solver) if no bracket is found within 60 doublings.
double implied_sigma(const HittingSpec& spec, double r, double c, double nu = 0.0);

}  // namespace lobcal
