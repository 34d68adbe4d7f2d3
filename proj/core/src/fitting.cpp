// -----------------------------------------------------------------------------
// fitting.cpp
// -----------------------------------------------------------------------------

#include "lobcal/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "lobcal/errors.hpp"

namespace lobcal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double rel_step_sq(double cur, double prev) {
  const double d = (cur - prev) / prev;
  return d * d;
}

double dt_unit(const FitConfig& cfg) {
  if (!(cfg.dt_s > 0) || !(cfg.time_unit_s > 0))
    throw Error(ErrorKind::config, "dt and time unit must be positive");
  return cfg.dt_s / cfg.time_unit_s;
}

void check_alignment(const ResampledSeries& series, const RollingStats& stats) {
  if (stats.ts_ms.size() != series.size())
    throw Error(ErrorKind::config, "estimator series not aligned with grid");
}

int fit_level(const ResampledSeries& series, std::size_t i, Side side,
              const FitConfig& cfg) {
  return cfg.level >= 0 ? cfg.level : series.deepest_level(i, side);
}

SideFit blank_side(std::size_t n) {
  SideFit sf;
  sf.r.assign(n, kNan);
  sf.u.assign(n, kNan);
  sf.valid.assign(n, 0);
  return sf;
}

// --- scalar minimization ----------------------------------------------------

template <typename F>
double golden_min(const F& f, double a, double b, double tol, int max_iter) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

// Coarse log-spaced scan to bracket the minimum (doubling the upper edge when
// the minimum sits on it), then golden-section inside the bracket. Keeps the
// block fit robust when the smoothness error has shallow plateaus.
template <typename F>
double minimize_rate(const F& f, double r_min, double r_hint,
                     const FitConfig& cfg) {
  double hi = std::max({10.0 * r_hint, 10.0 * r_min, 1.0});
  constexpr int kScan = 33;
  double grid[kScan];
  for (int expand = 0; expand < 8; ++expand) {
    const double la = std::log(r_min), lb = std::log(hi);
    int best = 0;
    double fbest = kInf;
    for (int k = 0; k < kScan; ++k) {
      grid[k] = std::exp(la + (lb - la) * k / (kScan - 1));
      const double fk = f(grid[k]);
      if (fk < fbest) {
        fbest = fk;
        best = k;
      }
    }
    if (best == kScan - 1 && expand < 7) {
      hi *= 8.0;
      continue;
    }
    const double a = grid[std::max(0, best - 1)];
    const double b = grid[std::min(kScan - 1, best + 1)];
    return golden_min(f, a, b, cfg.delta * std::max(1.0, b), 4 * cfg.max_iter);
  }
  return r_min;  // unreachable
}

// --- Nelder-Mead --------------------------------------------------------------

struct NmOut {
  std::vector<double> x;
  double f = kInf;
};

template <typename F>
NmOut nelder_mead(const F& f, const std::vector<double>& x0, double step,
                  double ftol, int max_iter) {
  const std::size_t dim = x0.size();
  std::vector<std::vector<double>> xs(dim + 1, x0);
  std::vector<double> fs(dim + 1);
  for (std::size_t j = 0; j < dim; ++j) xs[j + 1][j] += step;
  for (std::size_t k = 0; k <= dim; ++k) fs[k] = f(xs[k]);

  for (int it = 0; it < max_iter; ++it) {
    std::size_t b = 0, w = 0;
    for (std::size_t k = 1; k <= dim; ++k) {
      if (fs[k] < fs[b]) b = k;
      if (fs[k] > fs[w]) w = k;
    }
    std::size_t sw = (w == 0) ? 1 : 0;
    for (std::size_t k = 0; k <= dim; ++k)
      if (k != w && fs[k] > fs[sw]) sw = k;
    if (std::isfinite(fs[b]) && std::isfinite(fs[w]) &&
        fs[w] - fs[b] <= ftol * (1.0 + std::abs(fs[b])))
      break;

    std::vector<double> c(dim, 0.0);
    for (std::size_t k = 0; k <= dim; ++k)
      if (k != w)
        for (std::size_t j = 0; j < dim; ++j) c[j] += xs[k][j];
    for (double& v : c) v /= static_cast<double>(dim);

    const auto mix = [&](double t) {
      std::vector<double> y(dim);
      for (std::size_t j = 0; j < dim; ++j) y[j] = c[j] + t * (xs[w][j] - c[j]);
      return y;
    };

    const auto xr = mix(-1.0);
    const double fr = f(xr);
    if (fr < fs[b]) {
      const auto xe = mix(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        xs[w] = xe;
        fs[w] = fe;
      } else {
        xs[w] = xr;
        fs[w] = fr;
      }
    } else if (fr < fs[sw]) {
      xs[w] = xr;
      fs[w] = fr;
    } else {
      const bool outside = fr < fs[w];
      const auto xc = mix(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[w])) {
        xs[w] = xc;
        fs[w] = fc;
      } else {
        for (std::size_t k = 0; k <= dim; ++k) {
          if (k == b) continue;
          for (std::size_t j = 0; j < dim; ++j)
            xs[k][j] = xs[b][j] + 0.5 * (xs[k][j] - xs[b][j]);
          fs[k] = f(xs[k]);
        }
      }
    }
  }

  std::size_t b = 0;
  for (std::size_t k = 1; k <= dim; ++k)
    if (fs[k] < fs[b]) b = k;
  return {xs[b], fs[b]};
}

double to_log(double value, double floor_at) {
  return std::log(std::max(value - floor_at, 1e-6));
}

}  // namespace

// -----------------------------------------------------------------------------
// Smoothness error
// -----------------------------------------------------------------------------

double smoothness_error(const std::vector<double>& u_values) {
  for (double u : u_values)
    if (!(u > 0) || !std::isfinite(u))
      throw Error(ErrorKind::domain, "utilities must be positive and finite");
  double e = 0.0;
  for (std::size_t k = 1; k < u_values.size(); ++k)
    e += rel_step_sq(u_values[k], u_values[k - 1]);
  return e;
}

// -----------------------------------------------------------------------------
// GBM block fit
// -----------------------------------------------------------------------------

namespace {

struct GbmPoint {
  bool ok = false;
  double sigma = 0.0;
  double mu_hat = 0.0;  // nu / sigma
  double z = 0.0;       // log((S+D)/S) / sigma, signed
  double absd = 0.0;
};

double gbm_point_sigma(const RollingStats& stats, std::size_t i, double dt_u,
                       const FitConfig& cfg) {
  double sigma;
  if (cfg.gbm_sigma_source == SigmaSource::rolling_std)
    sigma = stats.sbar[i] / std::sqrt(dt_u);
  else
    sigma = std::sqrt(std::max(stats.bv_capped[i], 0.0) /
                      (static_cast<double>(stats.window_n) * dt_u));
  return std::max(sigma, cfg.sigma_min);
}

}  // namespace

FitResult fit_gbm(const ResampledSeries& series, const RollingStats& stats,
                  Side side, const FitConfig& cfg) {
  check_alignment(series, stats);
  const double dt_u = dt_unit(cfg);
  const std::size_t n = series.size();
  if (cfg.steps < 1) throw Error(ErrorKind::config, "steps must be >= 1");
  if (!(cfg.r_min > 0)) throw Error(ErrorKind::config, "r_min must be positive");

  FitResult res;
  res.model = Model::gbm;
  res.ts_ms = series.ts_ms;
  res.sigma.assign(n, kNan);
  res.bid = blank_side(n);
  res.ask = blank_side(n);
  SideFit& sf = side == Side::bid ? res.bid : res.ask;

  std::vector<GbmPoint> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!series.valid[i] || !stats.valid[i]) continue;
    const int level = fit_level(series, i, side, cfg);
    if (level < 0) continue;
    const auto d = series.distance(i, side, level, cfg.start_mode);
    if (!d || *d == 0.0) continue;
    const double s0 = series.start_price(i, side, cfg.start_mode);
    if (s0 + *d <= 0.0) continue;
    GbmPoint& pt = pts[i];
    pt.sigma = gbm_point_sigma(stats, i, dt_u, cfg);
    pt.mu_hat = stats.mbar[i] / dt_u / pt.sigma;
    pt.z = std::log((s0 + *d) / s0) / pt.sigma;
    pt.absd = std::abs(*d);
    pt.ok = true;
    res.sigma[i] = pt.sigma;
  }

  const auto utility = [&](std::size_t i, double r) {
    const GbmPoint& pt = pts[i];
    const double exponent =
        pt.mu_hat * pt.z -
        std::abs(pt.z) * std::sqrt(2.0 * r + pt.mu_hat * pt.mu_hat);
    return pt.absd * std::exp(exponent);
  };

  std::size_t i0 = 0;
  while (i0 < n && !pts[i0].ok) ++i0;
  if (i0 == n) return res;

  double r_prev = std::max(cfg.r0, cfg.r_min);
  double u_prev;
  if (side == Side::bid && cfg.u0_bid)
    u_prev = *cfg.u0_bid;
  else if (cfg.u0)
    u_prev = *cfg.u0;
  else
    u_prev = utility(i0, r_prev);
  if (!(u_prev > 0) || !std::isfinite(u_prev))
    throw Error(ErrorKind::config, "initial utility must be positive");

  sf.r[i0] = r_prev;
  sf.u[i0] = u_prev;
  sf.valid[i0] = 1;

  std::size_t i = i0;
  while (i + 1 < n) {
    const std::size_t lo = i + 1;
    const std::size_t hi =
        std::min(n - 1, i + static_cast<std::size_t>(cfg.steps));
    bool all_ok = true;
    for (std::size_t j = lo; j <= hi; ++j) all_ok = all_ok && pts[j].ok;
    if (!all_ok) {
      i = hi;  // points stay invalid; the utility chain carries across the gap
      continue;
    }

    const auto block_error = [&](double r) {
      double prev = u_prev;
      double e = 0.0;
      for (std::size_t j = lo; j <= hi; ++j) {
        const double u = utility(j, r);
        if (!(u > 0) || !std::isfinite(u)) return kInf;
        e += rel_step_sq(u, prev);
        prev = u;
      }
      return e;
    };

    const double r_star = minimize_rate(block_error, cfg.r_min, r_prev, cfg);
    if (block_error(r_star) > cfg.eps) ++res.blocks_above_eps;
    for (std::size_t j = lo; j <= hi; ++j) {
      sf.r[j] = r_star;
      sf.u[j] = utility(j, r_star);
      sf.valid[j] = 1;
    }
    u_prev = sf.u[hi];
    r_prev = r_star;
    i = hi;
  }
  return res;
}

// -----------------------------------------------------------------------------
// DEJD joint fit
// -----------------------------------------------------------------------------

namespace {

struct DejdPoint {
  bool ok = false;
  double s_ask = 0.0, d_ask = 0.0;
  double s_bid = 0.0, d_bid = 0.0;
};

struct DejdPrev {
  double r_ask = 0.0, r_bid = 0.0;
  double u_ask = 0.0, u_bid = 0.0;
  double eta1 = 3.0, eta2 = 3.0;
  double lambda = 0.0, p = 0.5;
};

struct DejdEval {
  double error = kInf;
  double r_ask = 0.0, r_bid = 0.0;
  double u_ask = 0.0, u_bid = 0.0;
  DejdCalibration cal;
  double eta1 = 0.0, eta2 = 0.0;
};

}  // namespace

FitResult fit_dejd(const ResampledSeries& series, const RollingStats& stats,
                   const FitConfig& cfg) {
  check_alignment(series, stats);
  const double dt_u = dt_unit(cfg);
  const std::size_t n = series.size();
  if (!(cfg.r_min > 0)) throw Error(ErrorKind::config, "r_min must be positive");

  FitResult res;
  res.model = Model::dejd;
  res.ts_ms = series.ts_ms;
  res.sigma.assign(n, kNan);
  res.lambda.assign(n, kNan);
  res.p.assign(n, kNan);
  res.eta1.assign(n, kNan);
  res.eta2.assign(n, kNan);
  res.bid = blank_side(n);
  res.ask = blank_side(n);

  std::vector<DejdPoint> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!series.valid[i] || !stats.valid[i]) continue;
    const int la = fit_level(series, i, Side::ask, cfg);
    const int lb = fit_level(series, i, Side::bid, cfg);
    if (la < 0 || lb < 0) continue;
    const auto da = series.distance(i, Side::ask, la, cfg.start_mode);
    const auto db = series.distance(i, Side::bid, lb, cfg.start_mode);
    if (!da || !db || *da == 0.0 || *db == 0.0) continue;
    DejdPoint& pt = pts[i];
    pt.s_ask = series.start_price(i, Side::ask, cfg.start_mode);
    pt.s_bid = series.start_price(i, Side::bid, cfg.start_mode);
    pt.d_ask = *da;
    pt.d_bid = *db;
    pt.ok = (pt.s_bid + pt.d_bid > 0.0);
  }

  const double r0 = cfg.r_min + std::max(cfg.r0 - cfg.r_min, 1e-6);
  DejdPrev prev;
  prev.r_ask = prev.r_bid = r0;
  bool initialized = false;

  const int dim = cfg.eta_equal ? 3 : 4;
  const double penalty_w = 100.0;

  for (std::size_t i = 0; i < n; ++i) {
    if (!pts[i].ok) continue;
    const DejdPoint& pt = pts[i];
    const double mbar = stats.mbar[i];
    const double rv = stats.rv[i];
    const double bvc = stats.bv_capped[i];

    // Utilities at given rates and tail exponents, with (lambda, p) eliminated
    // through the window's variance/drift constraints.
    const auto evaluate = [&](double r_ask, double r_bid, double eta1,
                              double eta2) -> DejdEval {
      DejdEval ev;
      ev.r_ask = r_ask;
      ev.r_bid = r_bid;
      ev.eta1 = eta1;
      ev.eta2 = eta2;
      try {
        ev.cal = calibrate_dejd_constraints(mbar, rv, bvc, stats.window_n, dt_u,
                                            eta1, eta2, cfg.sigma_min);
        DejdParams params;
        params.mu = 0.0;
        params.sigma = ev.cal.sigma;
        params.lambda = ev.cal.lambda;
        params.p = ev.cal.p;
        params.eta1 = eta1;
        params.eta2 = eta2;
        ev.u_ask = dejd_utility(params, {pt.s_ask, pt.d_ask}, r_ask);
        ev.u_bid = dejd_utility(params, {pt.s_bid, pt.d_bid}, r_bid);
      } catch (const Error&) {
        return ev;
      }
      if (!(ev.u_ask > 0) || !(ev.u_bid > 0) || !std::isfinite(ev.u_ask) ||
          !std::isfinite(ev.u_bid))
        return ev;
      double e = (rel_step_sq(ev.u_ask, prev.u_ask) +
                  rel_step_sq(ev.u_bid, prev.u_bid) +
                  rel_step_sq(r_ask, prev.r_ask) +
                  rel_step_sq(r_bid, prev.r_bid)) /
                 4.0;
      e += ev.cal.infeasibility;
      const double d1 = (eta1 - prev.eta1) * (eta1 - prev.eta1);
      const double d2 = (eta2 - prev.eta2) * (eta2 - prev.eta2);
      e += penalty_w * std::max(0.0, d1 - cfg.eta_cont_eps);
      e += penalty_w * std::max(0.0, d2 - cfg.eta_cont_eps);
      if (cfg.lambda_cont_eps >= 0) {
        const double dl = (ev.cal.lambda - prev.lambda);
        e += penalty_w * std::max(0.0, dl * dl - cfg.lambda_cont_eps);
      }
      if (cfg.p_cont_eps >= 0) {
        const double dp = (ev.cal.p - prev.p);
        e += penalty_w * std::max(0.0, dp * dp - cfg.p_cont_eps);
      }
      ev.error = e;
      return ev;
    };

    const auto decode = [&](const std::vector<double>& x) {
      const double r_ask = cfg.r_min + std::exp(x[0]);
      const double r_bid = cfg.r_min + std::exp(x[1]);
      const double eta1 = 2.0 + std::exp(x[2]);
      const double eta2 = cfg.eta_equal ? eta1 : 2.0 + std::exp(x[3]);
      return evaluate(r_ask, r_bid, eta1, eta2);
    };
    const auto objective = [&](const std::vector<double>& x) {
      return decode(x).error;
    };

    if (!initialized) {
      // The configured (r0, u0) act as the zeroth accepted point.
      const DejdEval seed = evaluate(r0, r0, prev.eta1, prev.eta2);
      prev.u_ask = cfg.u0.value_or(seed.u_ask);
      prev.u_bid = cfg.u0_bid.value_or(cfg.u0.value_or(seed.u_bid));
      prev.lambda = seed.cal.lambda;
      prev.p = seed.cal.p;
      if (!(prev.u_ask > 0) || !(prev.u_bid > 0))
        throw Error(ErrorKind::config, "initial utility must be positive");
      initialized = true;
    }

    const auto pack = [&](double r_ask, double r_bid, double eta1,
                          double eta2) {
      std::vector<double> x(static_cast<std::size_t>(dim));
      x[0] = to_log(r_ask, cfg.r_min);
      x[1] = to_log(r_bid, cfg.r_min);
      x[2] = to_log(eta1, 2.0);
      if (!cfg.eta_equal) x[3] = to_log(eta2, 2.0);
      return x;
    };

    const double jump_var = std::max((rv - bvc) / stats.window_n, 1e-12);
    const double eta_cal =
        std::clamp(std::sqrt(0.2 / jump_var), 2.5, 50.0);

    NmOut best = nelder_mead(objective, pack(prev.r_ask, prev.r_bid, prev.eta1, prev.eta2),
                             0.25, cfg.delta, 4 * cfg.max_iter);
    // Extra starts only when the warm start has not already converged: the
    // calibration-implied tails and a neutral restart guard against the warm
    // path tracking a stale local minimum.
    if (!(best.f <= cfg.eps)) {
      const NmOut alt = nelder_mead(
          objective, pack(prev.r_ask, prev.r_bid, eta_cal, eta_cal), 0.25,
          cfg.delta, 4 * cfg.max_iter);
      if (alt.f < best.f) best = alt;
    }
    if (!(best.f <= cfg.eps)) {
      const NmOut alt = nelder_mead(objective, pack(r0, r0, 3.0, 3.0), 0.25,
                                    cfg.delta, 4 * cfg.max_iter);
      if (alt.f < best.f) best = alt;
    }

    if (!std::isfinite(best.f)) continue;  // point stays invalid; carry state

    const DejdEval ev = decode(best.x);
    if (ev.error > cfg.eps) ++res.blocks_above_eps;

    res.ask.r[i] = ev.r_ask;
    res.ask.u[i] = ev.u_ask;
    res.ask.valid[i] = 1;
    res.bid.r[i] = ev.r_bid;
    res.bid.u[i] = ev.u_bid;
    res.bid.valid[i] = 1;
    res.sigma[i] = ev.cal.sigma;
    res.lambda[i] = ev.cal.lambda;
    res.p[i] = ev.cal.p;
    res.eta1[i] = ev.eta1;
    res.eta2[i] = ev.eta2;

    prev.r_ask = ev.r_ask;
    prev.r_bid = ev.r_bid;
    prev.u_ask = ev.u_ask;
    prev.u_bid = ev.u_bid;
    prev.eta1 = ev.eta1;
    prev.eta2 = ev.eta2;
    prev.lambda = ev.cal.lambda;
    prev.p = ev.cal.p;
  }
  return res;
}

// -----------------------------------------------------------------------------
// Implied-volatility smile
// -----------------------------------------------------------------------------

namespace {

SmileResult smile_core(const ResampledSeries& series, const RollingStats& stats,
                       double r, const SmileTarget& target,
                       const FitConfig& cfg) {
  check_alignment(series, stats);
  const double dt_u = dt_unit(cfg);
  SmileResult out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.valid[i] || !stats.valid[i]) continue;
    const double nu = stats.mbar[i] / dt_u;
    for (Side side : {Side::bid, Side::ask}) {
      const double s0 = series.start_price(i, side, cfg.start_mode);
      for (int level = 0; level < series.depth; ++level) {
        const auto d = series.distance(i, side, level, cfg.start_mode);
        if (!d || *d == 0.0 || s0 + *d <= 0.0) {
          ++out.n_skipped;
          continue;
        }
        const auto c = target(i, side, level);
        if (!c) {
          ++out.n_skipped;
          continue;
        }
        if (!(*c > 0) || *c >= std::abs(*d)) {
          ++out.n_skipped;
          continue;
        }
        double sigma;
        try {
          sigma = implied_sigma({s0, *d}, r, *c, nu);
        } catch (const Error&) {
          ++out.n_skipped;
          continue;
        }
        SmilePoint pt;
        pt.ts_ms = series.ts_ms[i];
        pt.side = side;
        pt.moneyness = (s0 + *d) / s0;
        pt.sigma_implied = sigma;
        out.points.push_back(pt);
      }
    }
  }
  return out;
}

}  // namespace

SmileResult extract_smile(const ResampledSeries& series,
                          const RollingStats& stats, double r, double c,
                          const FitConfig& cfg) {
  if (!(c > 0)) throw Error(ErrorKind::config, "target utility must be positive");
  const SmileTarget target = [c](std::size_t, Side, int) {
    return std::optional<double>(c);
  };
  return smile_core(series, stats, r, target, cfg);
}

SmileResult extract_smile(const ResampledSeries& series,
                          const RollingStats& stats, double r,
                          const SmileTarget& target, const FitConfig& cfg) {
  if (!target) throw Error(ErrorKind::config, "smile target is empty");
  return smile_core(series, stats, r, target, cfg);
}

// -----------------------------------------------------------------------------
// Power-law diagnostics
// -----------------------------------------------------------------------------

namespace {

SegmentFit ols_loglog(const std::vector<const DiagnosticsPoint*>& pts, int id) {
  SegmentFit fit;
  fit.segment = id;
  fit.n = pts.size();
  if (pts.size() < 3) return fit;
  double sx = 0, sy = 0;
  for (const auto* p : pts) {
    sx += std::log10(p->z);
    sy += std::log10(p->r);
  }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto* p : pts) {
    const double dx = std::log10(p->z) - mx;
    const double dy = std::log10(p->r) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0)) return fit;
  fit.slope = sxy / sxx;
  fit.alpha = -fit.slope;
  const double rss = std::max(0.0, syy - fit.slope * sxy);
  const double se = std::sqrt(rss / (n - 2.0) / sxx);
  fit.t_stat = se > 0 ? fit.slope / se : 0.0;
  return fit;
}

}  // namespace

Diagnostics diagnostics(const ResampledSeries& series, const RollingStats& stats,
                        const FitResult& fit, const FitConfig& cfg) {
  check_alignment(series, stats);
  if (fit.ts_ms.size() != series.size())
    throw Error(ErrorKind::config, "fit result not aligned with grid");
  const double dt_u = dt_unit(cfg);
  (void)dt_u;

  Diagnostics out;
  int segment = 0;
  double ua_prev = kNan, ub_prev = kNan;
  bool have_prev = false;

  for (std::size_t i = 0; i < series.size(); ++i) {
    const bool a_ok = i < fit.ask.valid.size() && fit.ask.valid[i];
    const bool b_ok = i < fit.bid.valid.size() && fit.bid.valid[i];
    if (!a_ok && !b_ok) continue;

    if (have_prev) {
      double step = 0.0;
      if (a_ok && std::isfinite(ua_prev) && ua_prev > 0)
        step = std::max(step, std::abs(fit.ask.u[i] - ua_prev) / ua_prev);
      if (b_ok && std::isfinite(ub_prev) && ub_prev > 0)
        step = std::max(step, std::abs(fit.bid.u[i] - ub_prev) / ub_prev);
      if (step > 0.05) ++segment;
    }

    for (Side side : {Side::bid, Side::ask}) {
      const bool ok = side == Side::bid ? b_ok : a_ok;
      if (!ok) continue;
      const int level = fit_level(series, i, side, cfg);
      if (level < 0) continue;
      const auto d = series.distance(i, side, level, cfg.start_mode);
      if (!d || *d == 0.0) continue;
      const double s0 = series.start_price(i, side, cfg.start_mode);
      if (s0 + *d <= 0) continue;
      const double sigma = fit.sigma[i];
      if (!(sigma > 0) || !std::isfinite(sigma)) continue;
      const double z = std::abs(std::log((s0 + *d) / s0)) / sigma;
      const double r = side == Side::bid ? fit.bid.r[i] : fit.ask.r[i];
      if (!(z > 0) || !(r > 0)) continue;
      DiagnosticsPoint pt;
      pt.ts_ms = series.ts_ms[i];
      pt.side = side;
      pt.z = z;
      pt.r = r;
      pt.segment = segment;
      out.points.push_back(pt);
    }

    if (a_ok) ua_prev = fit.ask.u[i];
    if (b_ok) ub_prev = fit.bid.u[i];
    have_prev = true;
  }

  std::map<int, std::vector<const DiagnosticsPoint*>> by_segment;
  std::vector<const DiagnosticsPoint*> all;
  all.reserve(out.points.size());
  for (const auto& pt : out.points) {
    by_segment[pt.segment].push_back(&pt);
    all.push_back(&pt);
  }
  for (const auto& [id, pts] : by_segment)
    if (pts.size() >= 8) out.segments.push_back(ols_loglog(pts, id));
  out.pooled = ols_loglog(all, -1);
  return out;
}

DailySummary daily_summary(const SideFit& side_fit) {
  DailySummary s;
  double sr = 0, su = 0;
  for (std::size_t i = 0; i < side_fit.valid.size(); ++i) {
    if (!side_fit.valid[i]) continue;
    ++s.n;
    sr += side_fit.r[i];
    su += side_fit.u[i];
  }
  if (s.n == 0) return s;
  const double n = static_cast<double>(s.n);
  s.r_mean = sr / n;
  s.u_mean = su / n;
  if (s.n >= 2) {
    double vr = 0, vu = 0;
    for (std::size_t i = 0; i < side_fit.valid.size(); ++i) {
      if (!side_fit.valid[i]) continue;
      vr += (side_fit.r[i] - s.r_mean) * (side_fit.r[i] - s.r_mean);
      vu += (side_fit.u[i] - s.u_mean) * (side_fit.u[i] - s.u_mean);
    }
    s.r_std = std::sqrt(vr / (n - 1.0));
    s.u_std = std::sqrt(vu / (n - 1.0));
  }
  return s;
}

}  // namespace lobcal
