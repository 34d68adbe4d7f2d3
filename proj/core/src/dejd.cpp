// -----------------------------------------------------------------------------
// dejd.cpp
// -----------------------------------------------------------------------------

#include "lobcal/dejd.hpp"

#include <cmath>
#include <limits>

#include "lobcal/errors.hpp"

namespace lobcal {

void validate(const DejdParams& params) {
  if (!(params.sigma > 0) || !std::isfinite(params.sigma))
    throw Error(ErrorKind::domain, "sigma must be positive and finite");
  if (!(params.lambda >= 0) || !std::isfinite(params.lambda))
    throw Error(ErrorKind::domain, "lambda must be non-negative and finite");
  if (!(params.p >= 0 && params.p <= 1))
    throw Error(ErrorKind::domain, "p must lie in [0, 1]");
  if (!(params.eta1 > 2) || !(params.eta2 > 2))
    throw Error(ErrorKind::domain,
                "eta1 and eta2 must exceed 2 (finite second exponential moment)");
}

double dexp_density(double y, double p, double eta1, double eta2) {
  const double q = 1.0 - p;
  if (y >= 0.0) return p * eta1 * std::exp(-eta1 * y);
  return q * eta2 * std::exp(eta2 * y);
}

JumpMoments jump_moments(const DejdParams& params) {
  validate(params);
  const double p = params.p, q = 1.0 - params.p;
  const double e1 = params.eta1, e2 = params.eta2;
  JumpMoments m;
  m.mean_y = p / e1 - q / e2;
  const double second_y = 2.0 * p / (e1 * e1) + 2.0 * q / (e2 * e2);
  m.var_y = second_y - m.mean_y * m.mean_y;
  m.mean_v = p * e1 / (e1 - 1.0) + q * e2 / (e2 + 1.0);
  m.mean_v2 = p * e1 / (e1 - 2.0) + q * e2 / (e2 + 2.0);
  m.var_v = m.mean_v2 - m.mean_v * m.mean_v;
  return m;
}

PoissonProductMoments poisson_product_moments(const DejdParams& params, double t) {
  if (t < 0) throw Error(ErrorKind::domain, "t must be non-negative");
  const JumpMoments jm = jump_moments(params);
  PoissonProductMoments m;
  m.mean_p = std::exp(params.lambda * t * (jm.mean_v - 1.0));
  m.mean_p2 = std::exp(params.lambda * t * (jm.mean_v2 - 1.0));
  m.var_p = m.mean_p2 - m.mean_p * m.mean_p;
  return m;
}

ProcessMoments process_moments(const DejdParams& params, double s0, double t) {
  if (s0 <= 0) throw Error(ErrorKind::domain, "s0 must be positive");
  const PoissonProductMoments pm = poisson_product_moments(params, t);
  ProcessMoments m;
  const double diff_mean = std::exp(params.mu * t);
  const double diff_mean2 =
      std::exp((2.0 * params.mu + params.sigma * params.sigma) * t);
  m.mean_s = s0 * diff_mean * pm.mean_p;
  const double mean_s2 = s0 * s0 * diff_mean2 * pm.mean_p2;
  m.var_s = mean_s2 - m.mean_s * m.mean_s;
  return m;
}

LogretMoments logret_moments(const DejdParams& params, double dt) {
  if (dt < 0) throw Error(ErrorKind::domain, "dt must be non-negative");
  const JumpMoments jm = jump_moments(params);
  LogretMoments m;
  const double mu_hat = params.mu - 0.5 * params.sigma * params.sigma;
  m.mean = mu_hat * dt + params.lambda * dt * jm.mean_y;
  const double second_y = jm.var_y + jm.mean_y * jm.mean_y;
  m.var = params.sigma * params.sigma * dt + params.lambda * dt * second_y;
  return m;
}

double mgf_jump(double theta, const DejdParams& params) {
  validate(params);
  if (!(theta > -params.eta2 && theta < params.eta1))
    throw Error(ErrorKind::domain, "jump MGF defined only on (-eta2, eta1)");
  const double q = 1.0 - params.p;
  return params.p * params.eta1 / (params.eta1 - theta) +
         q * params.eta2 / (params.eta2 + theta);
}

double g_function(double x, double mu_hat, const DejdParams& params) {
  const double q = 1.0 - params.p;
  // Zero-weight branches contribute exactly zero: evaluating the weighted
  // pole 0 * eta / (eta - x) at x == eta would otherwise produce NaN.
  double jump_term = 0.0;
  if (params.lambda != 0.0) {
    double mgf = -1.0;
    if (params.p != 0.0) mgf += params.p * params.eta1 / (params.eta1 - x);
    if (q != 0.0) mgf += q * params.eta2 / (params.eta2 + x);
    jump_term = params.lambda * mgf;
  }
  return x * mu_hat + 0.5 * x * x * params.sigma * params.sigma + jump_term;
}

namespace {

// Bisect g(x) = alpha on [lo, hi] where the level alpha is crossed exactly
// once from below. Returns early once the residual meets tol; otherwise runs
// the bracket down to adjacent representable numbers and returns the endpoint
// with the smaller residual. Near a steep pole one ulp of x can move g by
// more than tol, so interval collapse — the root exact to machine precision —
// must also count as convergence. Only a bracket that is still wide after
// max_iter halvings is a genuine solver failure.
double bisect_g(double lo, double hi, double alpha, double mu_hat,
                const DejdParams& params, double tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // adjacent doubles: cannot split further
    const double g = g_function(mid, mu_hat, params);
    if (std::abs(g - alpha) <= tol) return mid;
    (g < alpha ? lo : hi) = mid;
  }
  const double rlo = std::abs(g_function(lo, mu_hat, params) - alpha);
  const double rhi = std::abs(g_function(hi, mu_hat, params) - alpha);
  const double best = rlo <= rhi ? lo : hi;  // NaN endpoint loses the tie
  const double mid = 0.5 * (lo + hi);
  const bool collapsed = !(mid > lo && mid < hi);
  if (!collapsed && std::min(rlo, rhi) > tol)
    throw Error(ErrorKind::solver, "exponent root search did not meet tolerance");
  return best;
}

}  // namespace

BetaRoots find_beta_roots(double alpha, double mu_hat, const DejdParams& params,
                          double tol_rel, int max_iter) {
  validate(params);
  if (!(alpha > 0) || !std::isfinite(alpha))
    throw Error(ErrorKind::domain, "alpha must be positive and finite");
  if (!std::isfinite(mu_hat))
    throw Error(ErrorKind::domain, "mu_hat must be finite");

  const double inf = std::numeric_limits<double>::infinity();
  const double s2 = params.sigma * params.sigma;

  if (params.lambda == 0.0) {
    // Pure diffusion: one quadratic root; the companion root is reported as
    // +inf so callers can detect the degenerate branch.
    const double beta = (-mu_hat + std::sqrt(mu_hat * mu_hat + 2.0 * alpha * s2)) / s2;
    return {beta, inf};
  }

  const double tol = tol_rel * std::max(1.0, alpha);

  if (params.lambda * params.p < 1e-14) {
    // No upward jumps: the pole at eta1 vanishes and g is convex and
    // increasing past its minimum on the whole half-line, with exactly one
    // positive root. Passage happens with no overshoot, so the transform is
    // exp(-b * beta) with this single root (same contract as lambda == 0).
    double lo = 0.0;
    double hi = 1.0;
    int doublings = 0;
    while (g_function(hi, mu_hat, params) <= alpha) {
      hi *= 2.0;
      if (++doublings > 200)
        throw Error(ErrorKind::solver, "no bracket for the one-sided root");
    }
    return {bisect_g(lo, hi, alpha, mu_hat, params, tol, max_iter), inf};
  }

  // Two-sided case: beta1 in (0, eta1), beta2 in (eta1, inf); g increases
  // toward +inf at eta1- and from -inf past eta1+.
  const double hi1 = params.eta1 * (1.0 - 1e-12);
  const double lo2 = params.eta1 * (1.0 + 1e-12);

  double hi2 = params.eta1 + 1.0;
  int doublings = 0;
  while (g_function(hi2, mu_hat, params) <= alpha) {
    hi2 = params.eta1 + 2.0 * (hi2 - params.eta1);
    if (++doublings > 200)
      throw Error(ErrorKind::solver, "no bracket above eta1 for beta2");
  }

  if (g_function(hi1, mu_hat, params) <= alpha) {
    // The up-jump weight is so small that the pole lifts g above alpha only
    // inside the bracket margin: the near-pole root is numerically
    // nonexistent and its decomposition weight vanishes, so the far root
    // carries the whole transform (same contract as the one-sided branch).
    const double beta = bisect_g(lo2, hi2, alpha, mu_hat, params, tol, max_iter);
    return {beta, inf};
  }

  const double beta1 = bisect_g(0.0, hi1, alpha, mu_hat, params, tol, max_iter);
  // A root compressed against eta1+ (inside the bracket margin) carries a
  // decomposition weight of order the margin itself; the edge stands in.
  const double beta2 = g_function(lo2, mu_hat, params) >= alpha
                           ? lo2
                           : bisect_g(lo2, hi2, alpha, mu_hat, params, tol, max_iter);
  return {beta1, beta2};
}

double dejd_hitting_laplace(double b, double alpha, double mu_hat,
                            const DejdParams& params) {
  if (b < 0) throw Error(ErrorKind::domain, "barrier log-distance must be >= 0");
  if (b == 0.0) return 1.0;
  const BetaRoots roots = find_beta_roots(alpha, mu_hat, params);
  double value;
  if (std::isinf(roots.beta2)) {
    // Degenerate branch (no upward jumps): no overshoot, single exponential.
    value = std::exp(-b * roots.beta1);
  } else {
    const double e1 = params.eta1;
    const double c1 = (e1 - roots.beta1) / e1 * roots.beta2 / (roots.beta2 - roots.beta1);
    const double c2 = (roots.beta2 - e1) / e1 * roots.beta1 / (roots.beta2 - roots.beta1);
    value = c1 * std::exp(-b * roots.beta1) + c2 * std::exp(-b * roots.beta2);
  }
  if (value < 0.0) value = 0.0;
  if (value > 1.0) value = 1.0;
  return value;
}

PassageSetup passage_transform(const DejdParams& params, const HittingSpec& spec) {
  validate(params);
  if (spec.s0 <= 0) throw Error(ErrorKind::domain, "reference price must be positive");
  const double mu_hat = params.mu - 0.5 * params.sigma * params.sigma;
  PassageSetup setup;
  if (spec.d >= 0.0) {
    setup.b = std::log((spec.s0 + spec.d) / spec.s0);
    setup.mu_hat = mu_hat;
    setup.params = params;
    return setup;
  }
  const double ad = -spec.d;
  if (ad >= spec.s0)
    throw Error(ErrorKind::domain, "bid level must stay positive (|d| < s0)");
  // Downward passage of S is upward passage of the reflected log process:
  // drift flips sign and the up/down jump branches swap roles.
  setup.b = std::log(spec.s0 / (spec.s0 - ad));
  setup.mu_hat = -mu_hat;
  setup.params = params;
  setup.params.p = 1.0 - params.p;
  setup.params.eta1 = params.eta2;
  setup.params.eta2 = params.eta1;
  return setup;
}

double dejd_utility(const DejdParams& params, const HittingSpec& spec, double r) {
  if (r < 0) throw Error(ErrorKind::domain, "rate must be non-negative");
  if (spec.d == 0.0) return 0.0;
  const PassageSetup setup = passage_transform(params, spec);
  return std::abs(spec.d) * dejd_hitting_laplace(setup.b, r, setup.mu_hat, setup.params);
}

}  // namespace lobcal
