#pragma once

#include <cstdint>
#include <vector>

#include "lobcal/lob.hpp"

namespace lobcal {

// -----------------------------------------------------------------------------
// Rolling return statistics
// -----------------------------------------------------------------------------
//
// All estimators at grid index i are strictly backward-looking: they consume
// the window_n log-returns ending at i-1, i.e. mid-prices i-window_n-1 .. i-1.
// An estimate is valid only when every point of its window is valid.
//
//   mbar  mean of the window's log-returns
//   sbar  sample standard deviation (window_n - 1 denominator)
//   rv    realized variance, sum of squared log-returns
//   bv    bipower variation pi/((1 - 2/N) * 2) * sum_{j=3..N} |R_j||R_{j-2}|,
//         a jump-robust estimate of the diffusive variance over the window
//   bv_capped = min(bv, rv), so the implied jump variance rv - bv_capped >= 0
// -----------------------------------------------------------------------------

struct RollingStats {
  int window_n = 30;
  std::vector<std::int64_t> ts_ms;
  std::vector<double> mbar;
  std::vector<double> sbar;
  std::vector<double> rv;
  std::vector<double> bv;
  std::vector<double> bv_capped;
  std::vector<std::uint8_t> valid;

  std::size_t size() const { return ts_ms.size(); }
};

// Individual estimators over a mid-price series with a validity mask. Each
// output is aligned with the input; out_valid marks indices whose full window
// is usable. window_n must be >= 2 (>= 3 for bipower), else Error(config).
void rolling_mean_std(const std::vector<double>& mid,
                      const std::vector<std::uint8_t>& valid, int window_n,
                      std::vector<double>& mbar, std::vector<double>& sbar,
                      std::vector<std::uint8_t>& out_valid);

std::vector<double> realized_variance(const std::vector<double>& mid,
                                      const std::vector<std::uint8_t>& valid,
                                      int window_n);

std::vector<double> bipower_variation(const std::vector<double>& mid,
                                      const std::vector<std::uint8_t>& valid,
                                      int window_n);

// Convenience bundle running all of the above on a resampled series.
RollingStats rolling_stats(const ResampledSeries& series, int window_n);

// -----------------------------------------------------------------------------
// Jump-diffusion calibration from one window's statistics
// -----------------------------------------------------------------------------
//
// Under the no-drift convention (mu = 0), a window's statistics pin the
// diffusive variance, the jump variance and the jump mean:
//
//   sigma^2 dt = bv_capped / N
//   lambda dt (2p/eta1^2 + 2q/eta2^2) = (rv - bv_capped) / N   =: J
//   lambda dt (p/eta1 - q/eta2)       = mbar + bv_capped/(2N)  =: kappa
//
// Given candidate (eta1, eta2) the last two equations are linear in
// a = lambda dt p and b = lambda dt q and are solved exactly; negative
// solutions are clamped to zero and the residual constraint violation is
// reported so an optimizer can penalize the infeasible region.
// -----------------------------------------------------------------------------

struct DejdCalibration {
  double sigma = 0.0;   // per sqrt(time unit), floored at sigma_min
  double lambda = 0.0;  // per time unit
  double p = 0.5;
  double a = 0.0;              // lambda * dt * p
  double b = 0.0;              // lambda * dt * q
  double infeasibility = 0.0;  // squared relative violation after clamping
};

DejdCalibration calibrate_dejd_constraints(double mbar, double rv,
                                           double bv_capped, int window_n,
                                           double dt_u, double eta1, double eta2,
                                           double sigma_min = 1e-8);

}  // namespace lobcal
