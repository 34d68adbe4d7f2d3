#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lobcal/dejd.hpp"
#include "lobcal/estimators.hpp"
#include "lobcal/gbm.hpp"
#include "lobcal/lob.hpp"
#include "lobcal/simulator.hpp"

namespace lobcal {

// -----------------------------------------------------------------------------
// Impatience-rate fitting
// -----------------------------------------------------------------------------
//
// The discount rate r is recovered by smoothing model utilities through time:
// consecutive utilities (and, for the jump-diffusion fit, consecutive rates)
// should barely move, so each block/point minimizes the summed squared
// relative increments. Model parameters per grid point come from the rolling
// estimators; only r (GBM) or (r_bid, r_ask, eta1, eta2) (DEJD) are searched.
// -----------------------------------------------------------------------------

enum class SigmaSource { rolling_std, bipower };

struct FitConfig {
  double dt_s = 30.0;      // resampling grid spacing, seconds
  int window_n = 30;       // rolling window length
  int steps = 2;           // GBM block stride
  double r_min = 0.01;     // lower bound of the rate search
  double r0 = 1.0;         // initial rate
  std::optional<double> u0;       // initial utility; default: model utility at r0
  std::optional<double> u0_bid;   // DEJD bid-side override (default u0)
  double eps = 1e-4;       // error threshold for convergence reporting
  double delta = 1e-8;     // scalar-solver tolerance
  int max_iter = 200;      // iteration cap for inner solvers
  double time_unit_s = 3600.0;
  double sigma_min = 1e-8;     // volatility floor, per sqrt(time unit)
  double eta_cont_eps = 0.25;  // allowed squared step of eta between points

  int level = -1;  // order level fed to the fit; -1 = deepest occupied
  StartMode start_mode = StartMode::relevant_best;
  SigmaSource gbm_sigma_source = SigmaSource::rolling_std;

  // Optional stricter constraints; all off by default because enabling the
  // full set makes the point optimizations fail to converge on real data.
  bool eta_equal = false;       // force eta1 == eta2 (one shared variable)
  double lambda_cont_eps = -1;  // >= 0 enables a squared-step cap on lambda
  double p_cont_eps = -1;       // >= 0 enables a squared-step cap on p

  double invalid_budget = 0.2;  // tolerated invalid fraction before exit 2
};

struct SideFit {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<std::uint8_t> valid;
};

struct FitResult {
  Model model = Model::gbm;
  std::vector<std::int64_t> ts_ms;
  SideFit bid;
  SideFit ask;
  // Per-point model parameters at the accepted fit. sigma is filled for both
  // models; lambda/p/eta only for the jump-diffusion fit.
  std::vector<double> sigma;
  std::vector<double> lambda;
  std::vector<double> p;
  std::vector<double> eta1;
  std::vector<double> eta2;
  int blocks_above_eps = 0;  // blocks/points whose final error exceeded eps
};

// Sum of squared relative increments of a utility path; all values must be
// positive and finite, else Error(domain).
double smoothness_error(const std::vector<double>& u_values);

// Block-chained GBM rate fit for one book side (golden-section search in r
// per block of `steps` grid points, utilities chained across blocks).
FitResult fit_gbm(const ResampledSeries& series, const RollingStats& stats,
                  Side side, const FitConfig& cfg);

// Joint bid/ask jump-diffusion fit: per grid point, Nelder-Mead over
// (r_ask, r_bid, eta1, eta2) with (lambda, p) eliminated exactly through the
// window's calibration constraints.
FitResult fit_dejd(const ResampledSeries& series, const RollingStats& stats,
                   const FitConfig& cfg);

// -----------------------------------------------------------------------------
// Implied-volatility smile
// -----------------------------------------------------------------------------

struct SmilePoint {
  std::int64_t ts_ms = 0;
  Side side = Side::bid;
  double moneyness = 1.0;  // (S + D) / S; bid wing < 1 < ask wing
  double sigma_implied = 0.0;
};

struct SmileResult {
  std::vector<SmilePoint> points;
  int n_skipped = 0;  // c >= |D|, empty levels, or no-solution points
};

// Target utility per (grid point, side, level); returning nullopt skips.
using SmileTarget =
    std::function<std::optional<double>(std::size_t, Side, int)>;

// Inverts the GBM utility for sigma at every occupied level of every valid
// grid point, holding (r, c) fixed. The point's estimated log drift
// nu = mbar/dt is held fixed during the inversion. The overload taking a
// SmileTarget supplies per-point targets (used by round-trip controls).
SmileResult extract_smile(const ResampledSeries& series,
                          const RollingStats& stats, double r, double c,
                          const FitConfig& cfg);
SmileResult extract_smile(const ResampledSeries& series,
                          const RollingStats& stats, double r,
                          const SmileTarget& target, const FitConfig& cfg);

// -----------------------------------------------------------------------------
// Power-law diagnostics and daily summaries
// -----------------------------------------------------------------------------

struct DiagnosticsPoint {
  std::int64_t ts_ms = 0;
  Side side = Side::bid;
  double z = 0.0;  // |log((S+D)/S)| / sigma
  double r = 0.0;
  int segment = 0;
};

struct SegmentFit {
  int segment = -1;  // -1 marks the pooled fit
  std::size_t n = 0;
  double slope = 0.0;   // OLS slope of log10 r on log10 z
  double alpha = 0.0;   // -slope, the power-law exponent of r ~ z^-alpha
  double t_stat = 0.0;  // slope / SE(slope)
};

struct Diagnostics {
  std::vector<DiagnosticsPoint> points;
  std::vector<SegmentFit> segments;  // per constant-utility regime
  SegmentFit pooled;
};

// Pairs every valid fitted point's rate with its standardized log distance z
// and fits log10 r ~ log10 z per constant-utility segment (segments split
// where the relative utility step exceeds 5%) and pooled over all points.
Diagnostics diagnostics(const ResampledSeries& series, const RollingStats& stats,
                        const FitResult& fit, const FitConfig& cfg);

struct DailySummary {
  std::size_t n = 0;
  double r_mean = 0.0;
  double r_std = 0.0;  // sample standard deviation
  double u_mean = 0.0;
  double u_std = 0.0;
};

DailySummary daily_summary(const SideFit& side_fit);

}  // namespace lobcal
