#pragma once

#include "lobcal/gbm.hpp"

namespace lobcal {

// -----------------------------------------------------------------------------
// Double-exponential jump diffusion (DEJD)
// -----------------------------------------------------------------------------
//
//   S_t = S exp((mu - sigma^2/2) t + sigma B_t) * prod_{i<=N_t} V_i
//
// with N_t Poisson(lambda t) and Y = log V double-exponential:
//
//   f(y) = p eta1 e^{-eta1 y} 1_{y>=0} + q eta2 e^{+eta2 y} 1_{y<0},  q = 1-p.
//
// eta1, eta2 > 2 keeps second moments of V finite. First-passage transforms
// work on the log process X_t = mu_hat t + sigma B_t + sum Y_i with X_0 = 0
// and barrier b > 0, where
//
//   G(x) = x mu_hat + x^2 sigma^2/2 + lambda (p eta1/(eta1-x) + q eta2/(eta2+x) - 1)
//
// and G(beta) = alpha has exactly two positive roots 0 < beta1 < eta1 < beta2.
// E[e^{-alpha tau_b}] then evaluates in closed form from (beta1, beta2).
// Downward passages are reflected: drift sign flips and (p, eta1) <-> (q, eta2).
// -----------------------------------------------------------------------------

struct DejdParams {
  double mu = 0.0;      // diffusion drift per time unit
  double sigma = 0.2;   // diffusion volatility per sqrt(time unit), > 0
  double lambda = 0.0;  // jump intensity per time unit, >= 0
  double p = 0.5;       // up-jump probability, in [0, 1]
  double eta1 = 4.0;    // up-jump rate, > 2
  double eta2 = 6.0;    // down-jump rate, > 2
};

// Raises Error(domain) when a parameter is outside its range above.
void validate(const DejdParams& params);

// Jump-size density f(y) for Y = log V.
double dexp_density(double y, double p, double eta1, double eta2);

struct JumpMoments {
  double mean_y = 0.0;  // E[Y]   = p/eta1 - q/eta2
  double var_y = 0.0;   // Var[Y] = pq(1/eta1 + 1/eta2)^2 + p/eta1^2 + q/eta2^2
  double mean_v = 0.0;  // E[V]   = p eta1/(eta1-1) + q eta2/(eta2+1)
  double mean_v2 = 0.0; // E[V^2] = p eta1/(eta1-2) + q eta2/(eta2+2)
  double var_v = 0.0;   // E[V^2] - E[V]^2
};
JumpMoments jump_moments(const DejdParams& params);

struct PoissonProductMoments {
  double mean_p = 0.0;   // E[P_t]   = exp(t lambda (E V - 1))
  double mean_p2 = 0.0;  // E[P_t^2] = exp(t lambda (E V^2 - 1))
  double var_p = 0.0;
};
PoissonProductMoments poisson_product_moments(const DejdParams& params, double t);

struct ProcessMoments {
  double mean_s = 0.0;  // S e^{mu t} E[P_t]
  double var_s = 0.0;   // S^2 e^{2 mu t} (e^{sigma^2 t} E[P_t^2] - E[P_t]^2)
};
ProcessMoments process_moments(const DejdParams& params, double s0, double t);

struct LogretMoments {
  double mean = 0.0;  // (mu - sigma^2/2) dt + lambda dt (p/eta1 - q/eta2)
  double var = 0.0;   // sigma^2 dt + lambda dt (2p/eta1^2 + 2q/eta2^2)
};
LogretMoments logret_moments(const DejdParams& params, double dt);

// E[e^{theta Y}] = p eta1/(eta1 - theta) + q eta2/(eta2 + theta); requires
// theta in (-eta2, eta1), else Error(domain).
double mgf_jump(double theta, const DejdParams& params);

// Exponent generator evaluated through the rational jump expression, which is
// what the root finder needs on both sides of the eta1 pole. mu_hat is the
// log drift of the passage setup, not divided by sigma.
double g_function(double x, double mu_hat, const DejdParams& params);

struct BetaRoots {
  double beta1 = 0.0;  // in (0, eta1)
  double beta2 = 0.0;  // in (eta1, inf); +inf sentinel when lambda == 0
};

// Solves G(beta) = alpha by bisection on both sides of eta1 to a residual of
// tol_rel * max(1, alpha) (Error(solver) if max_iter bisections cannot reach
// it). lambda == 0 degenerates to the quadratic root
// beta* = (-mu_hat + sqrt(mu_hat^2 + 2 alpha sigma^2)) / sigma^2,
// returned as beta1 with beta2 = +inf.
BetaRoots find_beta_roots(double alpha, double mu_hat, const DejdParams& params,
                          double tol_rel = 1e-12, int max_iter = 200);

// E[e^{-alpha tau_b}] for the upward barrier b >= 0 (b = 0 returns exactly 1).
// With the +inf sentinel the pure-diffusion transform exp(-b beta1) is
// returned; the Theorem's two-term form otherwise. Result clamped to [0, 1].
double dejd_hitting_laplace(double b, double alpha, double mu_hat,
                            const DejdParams& params);

// Reduction of a resting-order passage to the canonical upward-barrier form.
struct PassageSetup {
  double b = 0.0;       // log barrier, >= 0
  double mu_hat = 0.0;  // log drift of the reduced process
  DejdParams params;    // jump parameters, mirrored for bid-side passages
};

// Ask side (d > 0): b = log((s0+d)/s0), mu_hat = mu - sigma^2/2, params kept.
// Bid side (d < 0): reflection–  b = -log((s0-|d|)/s0), mu_hat negated,
// (p, eta1) <-> (q, eta2). Raises Error(domain) when s0 <= 0 or |d| >= s0 on
// the bid side.
PassageSetup passage_transform(const DejdParams& params, const HittingSpec& spec);

// |d| * E[e^{-r tau}] for the resting order described by spec.
double dejd_utility(const DejdParams& params, const HittingSpec& spec, double r);

}  // namespace lobcal
