// Geometric Brownian motion: moments, first-passage Laplace transform,
// barrier-utility evaluation, and implied-volatility inversion.
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lobcal/errors.hpp"
#include "lobcal/gbm.hpp"
#include "lobcal/rng.hpp"
#include "test_helpers.hpp"

using namespace lobcal;

TEST_SUITE("gbm") {

TEST_CASE("closed-form moments match simulated terminal values") {
  const GbmParams params{0.12, 0.3};
  const double s0 = 80.0, t = 0.9;
  const GbmMoments mom = gbm_moments(params, s0, t);

  CHECK(mom.mean == doctest::Approx(s0 * std::exp(params.mu * t)).epsilon(1e-12));
  const double g = std::exp(params.mu * t);
  CHECK(mom.var == doctest::Approx(s0 * s0 * g * g *
                                   (std::exp(params.sigma * params.sigma * t) - 1.0))
                       .epsilon(1e-12));

  Rng rng(4242);
  const std::size_t n = 400000;
  testutil::MeanAcc acc_s;
  const double nu = params.mu - 0.5 * params.sigma * params.sigma;
  const double sq = params.sigma * std::sqrt(t);
  for (std::size_t i = 0; i < n; ++i)
    acc_s.add(s0 * std::exp(nu * t + sq * rng.normal()));
  CHECK(std::abs(acc_s.mean() - mom.mean) < 4 * acc_s.se());
  // Lognormal fourth moments make the variance estimator noisy; compare
  // with a generous relative budget instead of an SE multiple.
  CHECK(std::abs(acc_s.var() - mom.var) < 0.05 * mom.var);

  CHECK_THROWS_AS((void)gbm_moments(params, -1.0, t), Error);
  CHECK_THROWS_AS((void)gbm_moments(GbmParams{0.1, 0.0}, s0, t), Error);
}

TEST_CASE("hitting-time Laplace transform: special values and symmetry") {
  // z = 0 means the barrier is already hit.
  CHECK(bm_hitting_laplace(0.7, 0.0, 1.3) == 1.0);

  // Driftless case collapses to exp(-|z| sqrt(2 r)).
  for (const double z : {0.4, -0.4, 1.7, -1.7}) {
    for (const double r : {0.1, 0.5, 2.0}) {
      CHECK(bm_hitting_laplace(0.0, z, r) ==
            doctest::Approx(std::exp(-std::abs(z) * std::sqrt(2 * r))).epsilon(1e-13));
    }
  }

  // Values are probabilities-like: in (0, 1] and decreasing in r.
  double prev = 1.0;
  for (double r = 0.25; r < 4.0; r += 0.25) {
    const double v = bm_hitting_laplace(0.3, -0.9, r);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(v < prev);
    prev = v;
  }

  // Drift toward the barrier raises the transform.
  CHECK(bm_hitting_laplace(0.5, 0.8, 0.6) > bm_hitting_laplace(-0.5, 0.8, 0.6));
  CHECK(bm_hitting_laplace(-0.5, -0.8, 0.6) > bm_hitting_laplace(0.5, -0.8, 0.6));
}

TEST_CASE("hitting-time Laplace transform matches the density integral") {
  // The first-passage time of drifting Brownian motion to level z has the
  // inverse-Gaussian density |z| / sqrt(2 pi t^3) exp(-(z - mu t)^2 / (2t)).
  // Integrating e^{-r t} against it numerically is an independent check of
  // the closed-form exponent.
  const auto laplace_by_quadrature = [](double mu_hat, double z, double r) {
    const auto integrand = [&](double x) {
      const double t = std::exp(x);
      const double dev = z - mu_hat * t;
      const double two_pi = 6.283185307179586;
      const double log_g = -r * t - 0.5 * x - dev * dev / (2.0 * t) +
                           std::log(std::abs(z) / std::sqrt(two_pi));
      return log_g < -700.0 ? 0.0 : std::exp(log_g);
    };
    // Simpson over t = e^x, x in [-30, 6]; the integrand vanishes at both
    // ends (essential singularity at t -> 0, discount kills the tail).
    const double a = -30.0, b = 6.0;
    const int n = 20000;
    const double h = (b - a) / n;
    double sum = integrand(a) + integrand(b);
    for (int i = 1; i < n; ++i) sum += integrand(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
  };

  for (const double mu_hat : {-0.9, -0.2, 0.0, 0.4, 1.1}) {
    for (const double z : {-1.6, -0.3, 0.5, 2.0}) {
      for (const double r : {0.15, 0.7, 2.5}) {
        const double closed = bm_hitting_laplace(mu_hat, z, r);
        const double quad = laplace_by_quadrature(mu_hat, z, r);
        CHECK(std::abs(closed - quad) < 1e-8);
      }
    }
  }
}

TEST_CASE("hitting-time Laplace transform matches a Euler walk") {
  // Drift toward the barrier keeps paths short enough for a brute-force
  // fine-step walk.
  const double mu_hat = -0.6, z = -0.5, r = 0.7;
  const double closed = bm_hitting_laplace(mu_hat, z, r);

  Rng rng(1618);
  const double dt = 2e-4;
  const double sdt = std::sqrt(dt);
  const double t_max = 10.0;
  const std::size_t n_paths = 30000;
  testutil::MeanAcc acc;
  for (std::size_t i = 0; i < n_paths; ++i) {
    double x = 0.0, t = 0.0;
    double disc = 0.0;
    while (t < t_max) {
      x += mu_hat * dt + sdt * rng.normal();
      t += dt;
      if (x <= z) {
        disc = std::exp(-r * t);
        break;
      }
    }
    acc.add(disc);
  }
  // Discrete monitoring only overshoots the crossing, so the walk is biased
  // slightly low; the flat term absorbs that O(sqrt(dt)) effect.
  CHECK(std::abs(acc.mean() - closed) < 3 * acc.se() + 5e-3);
}

TEST_CASE("barrier utility equals depth times first-passage transform") {
  const GbmParams params{0.1, 0.25};
  const double r = 0.8;
  for (const double d : {4.0, -4.0, 0.5, -9.0}) {
    const HittingSpec spec{120.0, d};
    const double z = std::log((spec.s0 + spec.d) / spec.s0) / params.sigma;
    const double mu_hat =
        (params.mu - 0.5 * params.sigma * params.sigma) / params.sigma;
    CHECK(gbm_utility(params, spec, r) ==
          doctest::Approx(std::abs(d) * bm_hitting_laplace(mu_hat, z, r)).epsilon(1e-13));
  }
  CHECK(gbm_utility(params, HittingSpec{120.0, 0.0}, r) == 0.0);

  CHECK_THROWS_AS((void)gbm_utility(GbmParams{0.1, 0.0}, HittingSpec{120.0, 4.0}, r),
                  Error);
  CHECK_THROWS_AS((void)gbm_utility(params, HittingSpec{120.0, -120.0}, r), Error);
  CHECK_THROWS_AS((void)gbm_utility(params, HittingSpec{0.0, 4.0}, r), Error);
}

TEST_CASE("implied volatility round-trips the utility it was solved from") {
  const double r = 0.6;
  for (const double sigma_true : {0.05, 0.3, 1.4}) {
    for (const double nu : {-0.4, 0.0, 0.7}) {
      for (const double d : {2.0, -2.0, 7.5}) {
        const HittingSpec spec{100.0, d};
        const GbmParams params{nu + 0.5 * sigma_true * sigma_true, sigma_true};
        const double c = gbm_utility(params, spec, r);
        if (!(c > 0.0) || c >= std::abs(d)) continue;
        const double sigma_back = implied_sigma(spec, r, c, nu);
        CHECK(sigma_back == doctest::Approx(sigma_true).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("implied volatility rejects unattainable targets") {
  const HittingSpec spec{100.0, 10.0};
  const double r = 0.5;

  CHECK_THROWS_AS((void)implied_sigma(spec, r, 10.0, 0.0), Error);  // c >= |d|
  CHECK_THROWS_AS((void)implied_sigma(spec, r, 12.0, 0.0), Error);
  CHECK_THROWS_AS((void)implied_sigma(spec, r, 0.0, 0.0), Error);
  CHECK_THROWS_AS((void)implied_sigma(spec, r, -1.0, 0.0), Error);

  // With drift toward the barrier the sigma -> 0 limit of the utility is
  // |d| exp(-r |w| / |nu|), a positive floor; targets below it have no
  // solution while targets above it invert cleanly.
  const double nu = 1.0;
  const double w = std::log((spec.s0 + spec.d) / spec.s0);
  const double floor = std::abs(spec.d) * std::exp(-r * w / nu);
  CHECK(floor > 9.0);
  CHECK_THROWS_AS((void)implied_sigma(spec, r, 5.0, nu), Error);
  const double sigma = implied_sigma(spec, r, 9.9, nu);
  CHECK(sigma > 0.0);
  const GbmParams back{nu + 0.5 * sigma * sigma, sigma};
  CHECK(gbm_utility(back, spec, r) == doctest::Approx(9.9).epsilon(1e-8));
}

TEST_CASE("implied volatility is monotone in target and in depth") {
  const double r = 0.5, nu = -0.3;

  // The utility rises with sigma (more volatility reaches the barrier
  // sooner), so a larger target maps to a larger implied volatility.
  const HittingSpec spec{100.0, 10.0};
  double prev = 0.0;
  for (const double c : {0.5, 1.0, 2.0, 4.0, 6.0}) {
    const double sigma = implied_sigma(spec, r, c, nu);
    CHECK(sigma > prev);
    prev = sigma;
  }

  // At a fixed target, a deeper barrier needs more volatility to be worth
  // the same discounted payoff.
  prev = 0.0;
  for (const double d : {2.0, 4.0, 8.0, 16.0}) {
    const double sigma = implied_sigma(HittingSpec{100.0, d}, r, 0.45, nu);
    CHECK(sigma > prev);
    prev = sigma;
  }
}

}  // TEST_SUITE
