// -----------------------------------------------------------------------------
// estimators.cpp
// -----------------------------------------------------------------------------
//
// Rolling log-return statistics over an equidistant mid-price series, plus the
// exact elimination of (lambda, p) from one window's calibration constraints.
// -----------------------------------------------------------------------------

#include "lobcal/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "lobcal/errors.hpp"

namespace lobcal {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Log-returns aligned to their right endpoint: lr[j] = log(mid[j]/mid[j-1]).
/// lr_valid[j] requires both endpoints valid with positive prices.
void log_returns(const std::vector<double>& mid,
                 const std::vector<std::uint8_t>& valid, std::vector<double>& lr,
                 std::vector<std::uint8_t>& lr_valid) {
  const std::size_t n = mid.size();
  lr.assign(n, 0.0);
  lr_valid.assign(n, 0);
  for (std::size_t j = 1; j < n; ++j) {
    if (valid[j] && valid[j - 1] && mid[j] > 0.0 && mid[j - 1] > 0.0) {
      lr[j] = std::log(mid[j] / mid[j - 1]);
      lr_valid[j] = 1;
    }
  }
}

/// True when the window_n returns ending at i-1 are all usable.
bool window_ok(const std::vector<std::uint8_t>& lr_valid, std::size_t i, int n) {
  if (i < static_cast<std::size_t>(n) + 1) return false;
  for (std::size_t j = i - n; j <= i - 1; ++j)
    if (!lr_valid[j]) return false;
  return true;
}

void check_window(int window_n, int minimum) {
  if (window_n < minimum)
    throw Error(ErrorKind::config, "window_n must be at least " + std::to_string(minimum));
}

}  // namespace

void rolling_mean_std(const std::vector<double>& mid,
                      const std::vector<std::uint8_t>& valid, int window_n,
                      std::vector<double>& mbar, std::vector<double>& sbar,
                      std::vector<std::uint8_t>& out_valid) {
  check_window(window_n, 2);
  if (mid.size() != valid.size())
    throw Error(ErrorKind::config, "mid/valid size mismatch");

  const std::size_t n = mid.size();
  mbar.assign(n, 0.0);
  sbar.assign(n, 0.0);
  out_valid.assign(n, 0);

  std::vector<double> lr;
  std::vector<std::uint8_t> lr_valid;
  log_returns(mid, valid, lr, lr_valid);

  for (std::size_t i = 0; i < n; ++i) {
    if (!window_ok(lr_valid, i, window_n)) continue;
    double sum = 0.0;
    for (std::size_t j = i - window_n; j <= i - 1; ++j) sum += lr[j];
    const double mean = sum / window_n;
    double ss = 0.0;
    for (std::size_t j = i - window_n; j <= i - 1; ++j) {
      const double d = lr[j] - mean;
      ss += d * d;
    }
    mbar[i] = mean;
    sbar[i] = std::sqrt(ss / (window_n - 1));
    out_valid[i] = 1;
  }
}

std::vector<double> realized_variance(const std::vector<double>& mid,
                                      const std::vector<std::uint8_t>& valid,
                                      int window_n) {
  check_window(window_n, 2);
  const std::size_t n = mid.size();
  std::vector<double> rv(n, 0.0);

  std::vector<double> lr;
  std::vector<std::uint8_t> lr_valid;
  log_returns(mid, valid, lr, lr_valid);

  for (std::size_t i = 0; i < n; ++i) {
    if (!window_ok(lr_valid, i, window_n)) continue;
    double sum = 0.0;
    for (std::size_t j = i - window_n; j <= i - 1; ++j) sum += lr[j] * lr[j];
    rv[i] = sum;
  }
  return rv;
}

std::vector<double> bipower_variation(const std::vector<double>& mid,
                                      const std::vector<std::uint8_t>& valid,
                                      int window_n) {
  check_window(window_n, 3);
  const std::size_t n = mid.size();
  std::vector<double> bv(n, 0.0);

  std::vector<double> lr;
  std::vector<std::uint8_t> lr_valid;
  log_returns(mid, valid, lr, lr_valid);

  // pi/((1 - 2/N) * 2): the N-2 lag-2 products average to (2/pi) sigma^2 dt
  // each, so the constant makes E[bv] = sigma^2 * N dt for pure diffusion.
  const double norm = kPi / ((1.0 - 2.0 / window_n) * 2.0);

  for (std::size_t i = 0; i < n; ++i) {
    if (!window_ok(lr_valid, i, window_n)) continue;
    double sum = 0.0;
    for (std::size_t j = i - window_n + 2; j <= i - 1; ++j)
      sum += std::abs(lr[j]) * std::abs(lr[j - 2]);
    bv[i] = norm * sum;
  }
  return bv;
}

RollingStats rolling_stats(const ResampledSeries& series, int window_n) {
  check_window(window_n, 3);
  RollingStats stats;
  stats.window_n = window_n;
  stats.ts_ms = series.ts_ms;

  rolling_mean_std(series.mid, series.valid, window_n, stats.mbar, stats.sbar,
                   stats.valid);
  stats.rv = realized_variance(series.mid, series.valid, window_n);
  stats.bv = bipower_variation(series.mid, series.valid, window_n);

  stats.bv_capped.resize(stats.bv.size());
  for (std::size_t i = 0; i < stats.bv.size(); ++i)
    stats.bv_capped[i] = std::min(stats.bv[i], stats.rv[i]);
  return stats;
}

DejdCalibration calibrate_dejd_constraints(double mbar, double rv,
                                           double bv_capped, int window_n,
                                           double dt_u, double eta1, double eta2,
                                           double sigma_min) {
  if (window_n < 2 || dt_u <= 0 || eta1 <= 0 || eta2 <= 0)
    throw Error(ErrorKind::config, "calibration needs window_n >= 2, dt > 0, eta > 0");

  DejdCalibration cal;
  const double n = window_n;
  const double sigma2_dt = std::max(bv_capped, 0.0) / n;
  cal.sigma = std::max(std::sqrt(sigma2_dt / dt_u), sigma_min);

  const double jump_var_dt = std::max(rv - bv_capped, 0.0) / n;  // J
  const double kappa = mbar + sigma2_dt / 2.0;                   // lambda dt E[Y]

  // u = a/eta1, v = b/eta2 solve { u - v = kappa, u/eta1 + v/eta2 = J/2 }.
  const double a1 = 1.0 / eta1, a2 = 1.0 / eta2;
  double v = (jump_var_dt / 2.0 - kappa * a1) / (a1 + a2);
  double u = kappa + v;
  if (u < 0.0) {
    u = 0.0;
    v = -kappa;  // kappa <= 0 here, keeps the mean equation exact
  } else if (v < 0.0) {
    v = 0.0;
    u = kappa;  // kappa >= 0 here
  }

  const double var_model = 2.0 * (u * a1 + v * a2);
  const double scale = std::max(rv / n, 1e-30);
  const double viol = (var_model - jump_var_dt) / scale;
  cal.infeasibility = viol * viol;

  cal.a = u * eta1;
  cal.b = v * eta2;
  const double lambda_dt = cal.a + cal.b;
  if (lambda_dt > 1e-300) {
    cal.lambda = lambda_dt / dt_u;
    cal.p = cal.a / lambda_dt;
  } else {
    cal.lambda = 0.0;
    cal.p = 0.5;
  }
  return cal;
}

}  // namespace lobcal
