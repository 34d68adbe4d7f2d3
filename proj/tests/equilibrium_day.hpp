#pragma once

// Synthetic "equilibrium day" shared by the fitting unit tests and the
// acceptance suite.
//
// Construction. The mid price follows a deterministic 30-periodic log-return
// pattern: one large +/- pair (slots 0 and 15 of each 30-return cycle, both
// elements with the same constant amplitude, so they cancel exactly inside
// every 30-return window) and fourteen adjacent small +/- pairs filling the
// remaining slots. Each small pair shares one amplitude drawn from a slow
// sinusoidal profile, so every rolling window sums to (almost) zero while the
// realized/bipower variances sweep smoothly across the day. The deepest order
// level on each side is then placed at the distance D whose model utility at
// a known constant rate r_star equals a per-point target u_star (optionally
// jittered by a few percent). Running the corresponding rate fit on such a
// day must recover r_star everywhere, with no dependence on D.
//
// The large pair makes realized variance strictly exceed bipower variation
// (the lag-2 bipower products never pair the two large returns), so the
// diffusive volatility seen by the jump-robust estimator is roughly half the
// total volatility; a fit that prices with total volatility instead inherits
// a depth-dependent rate, which is what the power-law diagnostic detects.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lobcal/dejd.hpp"
#include "lobcal/estimators.hpp"
#include "lobcal/fitting.hpp"
#include "lobcal/gbm.hpp"
#include "lobcal/lob.hpp"
#include "lobcal/rng.hpp"
#include "lobcal/simulator.hpp"

namespace eqday {

struct EquilibriumDay {
  lobcal::ResampledSeries series;
  lobcal::RollingStats stats;
  std::vector<double> d_ask, d_bid;  // solved depths (quote units), 0 = unset
  std::vector<double> u_ask, u_bid;  // per-point utility targets, 0 = unset
  std::size_t first_fit = 0;         // first grid point with valid statistics
  double r_star = 1.5;
  double u_star = 0.20;
  double eta1 = 3.5, eta2 = 4.5;  // anchors used when solving the depths
  lobcal::FitConfig cfg;          // ready for fit_gbm / fit_dejd on this day
};

constexpr double kTau = 6.283185307179586;  // 2*pi

// Deterministic mid-price path; n grid points, 30 s apart, starting at 6000.
// amp_small sets the relative swing of the small-pair amplitude profile.
inline std::vector<double> pattern_mids(std::size_t n, double amp_small) {
  const double x = 1.6e-5;   // small-pair log-return scale
  const double big = 10.0;   // large pair = big * x
  const double big_amp = 1.4;
  std::vector<double> mid(n);
  mid[0] = 6000.0;
  double pair_amp = 1.0;  // frozen at each small pair's first element
  for (std::size_t j = 1; j < n; ++j) {
    const int slot = static_cast<int>((j - 1) % 30);
    double ret;
    if (slot == 0) {
      ret = big * big_amp * x;
    } else if (slot == 15) {
      ret = -big * big_amp * x;
    } else {
      // Small pairs (1,2),(3,4),...,(13,14) and (16,17),...,(28,29): the
      // first element fixes the pair's amplitude, the second negates it.
      const bool first = slot <= 14 ? (slot % 2 == 1) : (slot % 2 == 0);
      if (first)
        pair_amp = 1.0 + amp_small * std::sin(kTau * static_cast<double>(j) /
                                              static_cast<double>(n));
      ret = (first ? 1.0 : -1.0) * pair_amp * x;
    }
    mid[j] = mid[j - 1] * std::exp(ret);
  }
  return mid;
}

// Bisects the descending branch of d -> u_of_d(d) for u_of_d(d) == target.
// d_peak must sit at (or before) the utility maximum with u(d_peak) > target.
inline double solve_depth(const std::function<double(double)>& u_of_d,
                          double d_peak, double target) {
  if (!(u_of_d(d_peak) > target))
    throw std::runtime_error(
        "equilibrium day: utility target unreachable at this grid point");
  double lo = d_peak, hi = d_peak;
  for (int k = 0; k < 60 && u_of_d(hi) > target; ++k) hi *= 2.0;
  if (u_of_d(hi) > target)
    throw std::runtime_error("equilibrium day: no depth reaches the target");
  while (hi - lo > 1e-12 * hi) {
    const double m = 0.5 * (lo + hi);
    (u_of_d(m) > target ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

// Builds the day and solves the deepest-level depths against `pricing`
// (Model::dejd: double-exponential jump-diffusion utility calibrated from the
// window statistics at the eta anchors; Model::gbm: GBM utility from the
// rolling mean/std). jitter > 0 sweeps each side's target smoothly within
// +/- jitter around u_star (seeded random phases via jitter_seed).
inline EquilibriumDay build_equilibrium_day(std::size_t n, lobcal::Model pricing,
                                            std::uint64_t jitter_seed = 0,
                                            double jitter = 0.0,
                                            double amp_small = 0.1) {
  using namespace lobcal;
  if (n < 40) throw std::runtime_error("equilibrium day: n too small");

  EquilibriumDay day;
  ResampledSeries& s = day.series;
  s.dt_s = 30.0;
  s.tick = 0.5;
  s.depth = 5;
  s.mid = pattern_mids(n, amp_small);
  s.ts_ms.resize(n);
  s.best_bid.resize(n);
  s.best_ask.resize(n);
  s.valid.assign(n, 1);
  s.bid_px.assign(n, std::vector<double>(5, 0.0));
  s.ask_px.assign(n, std::vector<double>(5, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    s.ts_ms[i] = 32400000 + 30000 * static_cast<std::int64_t>(i);  // from 09:00
    s.best_bid[i] = s.mid[i] - 0.25;
    s.best_ask[i] = s.mid[i] + 0.25;
    s.bid_px[i][0] = s.best_bid[i];
    s.ask_px[i][0] = s.best_ask[i];
  }

  day.stats = rolling_stats(s, 30);
  const double dt_u = s.dt_s / 3600.0;

  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i)
    if (day.stats.valid[i]) {
      first = i;
      break;
    }
  if (first == n) throw std::runtime_error("equilibrium day: no valid stats");
  day.first_fit = first;

  day.d_ask.assign(n, 0.0);
  day.d_bid.assign(n, 0.0);
  day.u_ask.assign(n, 0.0);
  day.u_bid.assign(n, 0.0);

  Rng rng(jitter_seed);
  // Smooth per-side target curves: a sinusoid whose period is incommensurate
  // with the 30-slot return pattern, with a seeded random phase per side.
  // Smoothness matters for what the day is meant to test: the per-point chain
  // responds to target *changes* while the solved depth encodes the target
  // *level*, so white per-point jitter writes the same draw into both the
  // rate and the depth and fakes a depth-rate association that no correct
  // algorithm could avoid. A smooth curve moves the depth through the level
  // and the rate through the (much smaller) derivative, which stay
  // uncorrelated over whole periods.
  constexpr double kJitterPeriod = 97.0;
  const double phase_ask = kTau * rng.uniform();
  const double phase_bid = kTau * rng.uniform();
  auto target_at = [&](std::size_t i, double phase) {
    if (jitter <= 0.0) return day.u_star;
    const double arg = kTau * static_cast<double>(i) / kJitterPeriod + phase;
    return day.u_star * (1.0 + jitter * std::sin(arg));
  };

  for (std::size_t i = first; i < n; ++i) {
    const double ta = target_at(i, phase_ask);
    const double tb = target_at(i, phase_bid);
    day.u_ask[i] = ta;
    day.u_bid[i] = tb;

    std::function<double(double)> ua, ub;
    double sigma;  // per sqrt(time unit), used only for the peak estimate
    if (pricing == Model::dejd) {
      const DejdCalibration cal = calibrate_dejd_constraints(
          day.stats.mbar[i], day.stats.rv[i], day.stats.bv_capped[i], 30, dt_u,
          day.eta1, day.eta2);
      const DejdParams params{0.0, cal.sigma, cal.lambda, cal.p, day.eta1,
                              day.eta2};
      sigma = cal.sigma;
      ua = [params, &s, i, &day](double d) {
        return dejd_utility(params, {s.best_ask[i], d}, day.r_star);
      };
      ub = [params, &s, i, &day](double d) {
        return dejd_utility(params, {s.best_bid[i], -d}, day.r_star);
      };
    } else {
      const double sig = day.stats.sbar[i] / std::sqrt(dt_u);
      const double mu = day.stats.mbar[i] / dt_u + 0.5 * sig * sig;
      const GbmParams params{mu, sig};
      sigma = sig;
      ua = [params, &s, i, &day](double d) {
        return gbm_utility(params, {s.best_ask[i], d}, day.r_star);
      };
      ub = [params, &s, i, &day](double d) {
        return gbm_utility(params, {s.best_bid[i], -d}, day.r_star);
      };
    }

    const double d_peak_a = sigma * s.best_ask[i] / std::sqrt(2.0 * day.r_star);
    const double d_peak_b = sigma * s.best_bid[i] / std::sqrt(2.0 * day.r_star);
    day.d_ask[i] = solve_depth(ua, d_peak_a, ta);
    day.d_bid[i] = solve_depth(ub, d_peak_b, tb);
    s.ask_px[i][4] = s.best_ask[i] + day.d_ask[i];
    s.bid_px[i][4] = s.best_bid[i] - day.d_bid[i];
  }

  day.cfg.dt_s = 30.0;
  day.cfg.window_n = 30;
  // Deliberately wrong initial rate: the block fit must recover the rate
  // that priced the book from a mispriced start. The per-point joint fit is
  // anchored by construction (its step penalties track the configured
  // (r0, u0) pair), so tests of that algorithm reset r0 to r_star.
  day.cfg.r0 = 1.8;
  day.cfg.u0 = day.u_ask[first];
  day.cfg.u0_bid = day.u_bid[first];
  return day;
}

// ---------------------------------------------------------------------------
// Power-law day: a jump-hazard book for the model-separation diagnostic.
// ---------------------------------------------------------------------------
//
// The mid price carries two genuine jump-scale moves per 30-return cycle
// (slots 0 and 15, +/-J with J hundreds of times the book depth in log terms,
// both neighbours forced to zero so the bipower products never touch them)
// plus twelve adjacent +/-x diffusion pairs. Every 30-return window therefore
// sees the full cycle: the window mean is exactly zero, realized variance
// exceeds bipower variation by exactly the jump contribution, and all rolling
// statistics are constant across the day. The deepest level sweeps slowly
// through [d_lo, d_hi] and is priced by the jump-diffusion transform at
// r_star.
//
// Physics under test: jumps that dwarf the book cross every level when they
// arrive, so the true passage utility has a depth-independent hazard floor
// ~lambda/(r+lambda). A diffusion-only fit must absorb that floor into its
// rate: matching |d|*exp(-z*sqrt(2r)) to a z-independent floor forces
// r ~ (log floor)^2 / (2 z^2) — the inverse-square power law the diagnostic
// regression detects. The jump-diffusion fit prices the floor itself and
// keeps the rate flat.
struct PowerLawDay {
  lobcal::ResampledSeries series;
  lobcal::RollingStats stats;
  std::vector<double> u_ask, u_bid;  // transform utilities at r_star
  std::size_t first_fit = 0;
  double r_star = 1.5;
  double eta_p = 12.0;  // pricing tail rate (both tails)
  lobcal::FitConfig cfg;
};

inline PowerLawDay build_power_law_day(std::size_t n) {
  using namespace lobcal;
  if (n < 120) throw std::runtime_error("power-law day: n too small");

  PowerLawDay day;
  ResampledSeries& s = day.series;
  s.dt_s = 30.0;
  s.tick = 0.5;
  s.depth = 5;

  const double x = 4.4e-5;  // diffusion pair scale
  const double J = 0.042;   // jump log-size (vs book depth ~8e-4)

  s.mid.resize(n);
  double log_mid = std::log(6000.0);
  s.mid[0] = 6000.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t slot = i % 30;
    double ret = 0.0;
    if (slot == 0)
      ret = J;
    else if (slot == 15)
      ret = -J;
    else if (slot == 1 || slot == 14 || slot == 16 || slot == 29)
      ret = 0.0;  // guards: bipower products never touch a jump
    else if (slot >= 2 && slot <= 13)
      ret = slot % 2 == 0 ? x : -x;
    else
      ret = slot % 2 == 1 ? x : -x;  // slots 17..28
    log_mid += ret;
    s.mid[i] = std::exp(log_mid);
  }

  s.ts_ms.resize(n);
  s.best_bid.resize(n);
  s.best_ask.resize(n);
  s.valid.assign(n, 1);
  s.bid_px.assign(n, std::vector<double>(5, 0.0));
  s.ask_px.assign(n, std::vector<double>(5, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    s.ts_ms[i] = 32400000 + 30000 * static_cast<std::int64_t>(i);
    s.best_bid[i] = s.mid[i] - 0.25;
    s.best_ask[i] = s.mid[i] + 0.25;
    s.bid_px[i][0] = s.best_bid[i];
    s.ask_px[i][0] = s.best_ask[i];
  }

  day.stats = rolling_stats(s, 30);
  const double dt_u = s.dt_s / 3600.0;

  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i)
    if (day.stats.valid[i]) {
      first = i;
      break;
    }
  if (first == n) throw std::runtime_error("power-law day: no valid stats");
  day.first_fit = first;

  day.u_ask.assign(n, 0.0);
  day.u_bid.assign(n, 0.0);

  for (std::size_t i = first; i < n; ++i) {
    // Deepest level sweeps [1, 5] quote units, slowly and incommensurately
    // with both the 30-slot cycle and the day length.
    const double d = 3.0 + 2.0 * std::sin(kTau * static_cast<double>(i) / 311.0);
    const DejdCalibration cal = calibrate_dejd_constraints(
        day.stats.mbar[i], day.stats.rv[i], day.stats.bv_capped[i], 30, dt_u,
        day.eta_p, day.eta_p);
    const DejdParams params{0.0, cal.sigma, cal.lambda, cal.p, day.eta_p,
                            day.eta_p};
    day.u_ask[i] = dejd_utility(params, {s.best_ask[i], d}, day.r_star);
    day.u_bid[i] = dejd_utility(params, {s.best_bid[i], -d}, day.r_star);
    s.ask_px[i][4] = s.best_ask[i] + d;
    s.bid_px[i][4] = s.best_bid[i] - d;
  }

  day.cfg.dt_s = 30.0;
  day.cfg.window_n = 30;
  day.cfg.r0 = day.r_star;
  day.cfg.u0 = day.u_ask[first];
  day.cfg.u0_bid = day.u_bid[first];
  // The diffusion fit must price with the jump-robust volatility: the
  // separation under test is the missing jump hazard, not inflated variance.
  day.cfg.gbm_sigma_source = SigmaSource::bipower;
  return day;
}

}  // namespace eqday
