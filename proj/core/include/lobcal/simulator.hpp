#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lobcal/dejd.hpp"

namespace lobcal {

// -----------------------------------------------------------------------------
// Seeded simulation and Monte-Carlo first-passage oracles
// -----------------------------------------------------------------------------

enum class Model { gbm, dejd };

struct PathSpec {
  Model model = Model::gbm;
  DejdParams params;  // lambda/p/eta ignored for Model::gbm
  double s0 = 100.0;
  double horizon_s = 8.5 * 3600.0;
  double grid_dt_s = 30.0;
  double time_unit_s = 3600.0;  // seconds per rate time-unit
  std::uint64_t seed = 1;
};

struct SimulatedPath {
  // Exact skeleton: every grid time plus every jump instant, in time order.
  std::vector<double> t_s;
  std::vector<double> s;
  // Grid-only view (first point at t = 0).
  std::vector<double> grid_t_s;
  std::vector<double> grid_s;
};

// Exact sampling between events: Brownian increments over each inter-event
// gap, jump factors applied at jump instants. Deterministic in spec.seed.
SimulatedPath simulate_path(const PathSpec& spec);

struct FirstPassageEstimate {
  double mean_discount = 0.0;  // MC estimate of E[e^{-r tau}; tau <= t_max]
  double std_error = 0.0;
  std::int64_t n_paths = 0;
  double t_max = 0.0;  // censoring horizon, time units
};

// Estimates E[e^{-r tau}] for the first passage of the log price to
// log(barrier/s0). Jump instants are checked exactly; between jumps the
// diffusion is monitored on an adaptive grid whose step shrinks quadratically
// with the distance to the barrier,
//
//   h = clamp(0.1 (d/sigma)^2, 1e-4 (w/sigma)^2, gap to next event),
//
// d = current log distance, w = initial log distance. Detection is one-sided
// (no bridge correction), so the estimate is biased low by at most ~2e-3 --
// inside the oracle tolerances used by the tests. Paths not absorbed by
// t_max (default ln(1e6)/r, so the truncated mass is < 1e-6) contribute zero.
//
// Each path draws from an independent (seed, path index) stream and partial
// sums are reduced in fixed chunk order, so the result is identical for any
// thread count. n_threads = 0 uses the hardware concurrency.
FirstPassageEstimate mc_first_passage(const PathSpec& spec, double barrier,
                                      double r, std::int64_t n_paths,
                                      double t_max = -1.0, int n_threads = 0);

// -----------------------------------------------------------------------------
// Synthetic raw feed generation
// -----------------------------------------------------------------------------

struct SynthBookSpec {
  int depth = 5;
  double tick = 0.5;
  std::int64_t dt_event_ms = 500;      // spacing of feed timestamps
  std::int64_t start_ts_ms = 32400000; // 09:00:00.000
  std::int64_t min_size = 1;
  std::int64_t max_size = 50;
};

// Renders a simulated mid path as a raw update feed: a one-tick spread
// straddling the path, `depth` levels per side, sizes drawn from the path's
// seed, and only changed levels re-emitted after the opening revision. The
// reconstructed, resampled mid deviates from the input path by at most
// tick/2.
std::string synth_lob_day(const PathSpec& path_spec, const SynthBookSpec& book);

}  // namespace lobcal
