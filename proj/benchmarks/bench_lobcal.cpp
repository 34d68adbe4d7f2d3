// Microbenchmarks for the hot paths: feed parsing, book reconstruction,
// rolling estimators, root finding, first-passage transforms and simulation.

#include <benchmark/benchmark.h>

#include <cmath>
#include <string>
#include <vector>

#include "lobcal/dejd.hpp"
#include "lobcal/estimators.hpp"
#include "lobcal/gbm.hpp"
#include "lobcal/lob.hpp"
#include "lobcal/rng.hpp"
#include "lobcal/simulator.hpp"

namespace {

// One shared synthetic feed (two hours of 500 ms book events) so the parsing
// and reconstruction benchmarks chew on realistic input without file I/O.
struct Workload {
  lobcal::BookConfig book;
  std::string feed;
  lobcal::ParseResult parsed;
  std::vector<lobcal::LobSnapshot> snapshots;
  lobcal::ResampledSeries series;

  Workload() {
    lobcal::PathSpec spec;
    spec.model = lobcal::Model::dejd;
    spec.params = lobcal::DejdParams{0.0, 0.01, 4.0, 0.4, 400.0, 500.0};
    spec.s0 = 6000.0;
    spec.horizon_s = 2.0 * 3600.0;
    spec.seed = 7;
    lobcal::SynthBookSpec synth;
    book = lobcal::BookConfig{synth.depth, synth.tick};
    feed = lobcal::synth_lob_day(spec, synth);
    parsed = lobcal::parse_raw(feed, book);
    snapshots = lobcal::reconstruct(parsed.updates, book);
    series = lobcal::resample(snapshots, 30.0, book);
  }
};

const Workload& workload() {
  static const Workload w;
  return w;
}

void BM_ParseRaw(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) {
    lobcal::ParseResult r = lobcal::parse_raw(w.feed, w.book);
    benchmark::DoNotOptimize(r.updates.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(w.feed.size()));
}
BENCHMARK(BM_ParseRaw)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) {
    std::vector<lobcal::LobSnapshot> s = lobcal::reconstruct(w.parsed.updates, w.book);
    benchmark::DoNotOptimize(s.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(w.parsed.updates.size()));
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMillisecond);

void BM_RollingStats(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) {
    lobcal::RollingStats s = lobcal::rolling_stats(w.series, 30);
    benchmark::DoNotOptimize(s.mbar.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(w.series.size()));
}
BENCHMARK(BM_RollingStats);

void BM_BetaRoots(benchmark::State& state) {
  const lobcal::DejdParams p{0.0, 0.3, 1.5, 0.4, 5.0, 6.0};
  double alpha = 0.3;
  for (auto _ : state) {
    alpha = alpha > 2.0 ? 0.3 : alpha + 0.1;
    lobcal::BetaRoots roots = lobcal::find_beta_roots(alpha, 0.05, p);
    benchmark::DoNotOptimize(roots.beta1);
  }
}
BENCHMARK(BM_BetaRoots);

void BM_DejdHittingLaplace(benchmark::State& state) {
  const lobcal::DejdParams p{0.0, 0.3, 1.5, 0.4, 5.0, 6.0};
  double b = 0.01;
  for (auto _ : state) {
    b = b > 0.5 ? 0.01 : b + 0.01;
    benchmark::DoNotOptimize(lobcal::dejd_hitting_laplace(b, 0.8, 0.05, p));
  }
}
BENCHMARK(BM_DejdHittingLaplace);

void BM_BmHittingLaplace(benchmark::State& state) {
  double z = 0.01;
  for (auto _ : state) {
    z = z > 0.5 ? 0.01 : z + 0.01;
    benchmark::DoNotOptimize(lobcal::bm_hitting_laplace(0.05, z, 0.8));
  }
}
BENCHMARK(BM_BmHittingLaplace);

void BM_NormalDraws(benchmark::State& state) {
  lobcal::Rng rng(17);
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 0; i < 1024; ++i) acc += rng.normal();
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 1024);
}
BENCHMARK(BM_NormalDraws);

void BM_SimulatePath(benchmark::State& state) {
  lobcal::PathSpec spec;
  spec.model = lobcal::Model::dejd;
  spec.params = lobcal::DejdParams{0.05, 0.3, 2.0, 0.4, 5.0, 6.0};
  spec.horizon_s = 3600.0;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    spec.seed = seed++;
    lobcal::SimulatedPath path = lobcal::simulate_path(spec);
    benchmark::DoNotOptimize(path.grid_s.data());
  }
}
BENCHMARK(BM_SimulatePath);

void BM_McFirstPassage(benchmark::State& state) {
  lobcal::PathSpec spec;
  spec.model = lobcal::Model::dejd;
  spec.params = lobcal::DejdParams{0.05, 0.3, 2.0, 0.4, 5.0, 6.0};
  spec.s0 = 1.0;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    spec.seed = seed++;
    lobcal::FirstPassageEstimate est =
        lobcal::mc_first_passage(spec, std::exp(0.2), 0.8, 1000, -1.0, 1);
    benchmark::DoNotOptimize(est.mean_discount);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 1000);
}
BENCHMARK(BM_McFirstPassage)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
