// -----------------------------------------------------------------------------
// simulator.cpp
// -----------------------------------------------------------------------------

#include "lobcal/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "lobcal/csv.hpp"
#include "lobcal/errors.hpp"
#include "lobcal/rng.hpp"

namespace lobcal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ModelParams {
  double mu_hat = 0.0;  // log drift per time unit
  double sigma = 0.0;
  double lambda = 0.0;  // per time unit; 0 for pure diffusion
  double p = 0.5;
  double eta1 = 4.0;
  double eta2 = 6.0;
};

ModelParams effective_params(const PathSpec& spec) {
  if (!(spec.params.sigma > 0))
    throw Error(ErrorKind::domain, "sigma must be positive");
  if (!(spec.s0 > 0)) throw Error(ErrorKind::domain, "s0 must be positive");
  if (!(spec.time_unit_s > 0))
    throw Error(ErrorKind::domain, "time unit must be positive");
  ModelParams mp;
  mp.mu_hat = spec.params.mu - 0.5 * spec.params.sigma * spec.params.sigma;
  mp.sigma = spec.params.sigma;
  if (spec.model == Model::dejd && spec.params.lambda > 0) {
    validate(spec.params);
    mp.lambda = spec.params.lambda;
    mp.p = spec.params.p;
    mp.eta1 = spec.params.eta1;
    mp.eta2 = spec.params.eta2;
  }
  return mp;
}

double draw_jump(Rng& rng, const ModelParams& mp) {
  if (rng.uniform() < mp.p) return rng.exponential() / mp.eta1;
  return -rng.exponential() / mp.eta2;
}

}  // namespace

SimulatedPath simulate_path(const PathSpec& spec) {
  const ModelParams mp = effective_params(spec);
  if (!(spec.horizon_s > 0) || !(spec.grid_dt_s > 0))
    throw Error(ErrorKind::domain, "horizon and grid step must be positive");

  Rng rng(spec.seed);

  // Jump instants in seconds, drawn up front so the diffusion draws are
  // consumed in time order regardless of grid spacing.
  std::vector<double> jump_t_s;
  if (mp.lambda > 0) {
    const double rate_per_s = mp.lambda / spec.time_unit_s;
    double t = rng.exponential() / rate_per_s;
    while (t <= spec.horizon_s) {
      jump_t_s.push_back(t);
      t += rng.exponential() / rate_per_s;
    }
  }

  const auto n_grid =
      static_cast<std::size_t>(std::floor(spec.horizon_s / spec.grid_dt_s + 1e-9));

  SimulatedPath path;
  path.t_s.reserve(n_grid + jump_t_s.size() + 1);
  path.s.reserve(n_grid + jump_t_s.size() + 1);
  path.grid_t_s.reserve(n_grid + 1);
  path.grid_s.reserve(n_grid + 1);

  double x = 0.0;  // log-return from s0; the start price is emitted exactly
  double t_cur = 0.0;
  std::size_t next_jump = 0;

  const auto emit = [&](double t_s, bool on_grid) {
    const double s = spec.s0 * std::exp(x);
    path.t_s.push_back(t_s);
    path.s.push_back(s);
    if (on_grid) {
      path.grid_t_s.push_back(t_s);
      path.grid_s.push_back(s);
    }
  };

  const auto diffuse_to = [&](double t_s) {
    const double dt_u = (t_s - t_cur) / spec.time_unit_s;
    if (dt_u > 0)
      x += mp.mu_hat * dt_u + mp.sigma * std::sqrt(dt_u) * rng.normal();
    t_cur = t_s;
  };

  emit(0.0, true);
  for (std::size_t k = 1; k <= n_grid; ++k) {
    const double t_grid = static_cast<double>(k) * spec.grid_dt_s;
    while (next_jump < jump_t_s.size() && jump_t_s[next_jump] <= t_grid) {
      diffuse_to(jump_t_s[next_jump]);
      x += draw_jump(rng, mp);
      emit(t_cur, false);
      ++next_jump;
    }
    diffuse_to(t_grid);
    emit(t_grid, true);
  }
  return path;
}

// -----------------------------------------------------------------------------
// Monte-Carlo first passage
// -----------------------------------------------------------------------------

namespace {

// One path: returns e^{-r tau} if the log price reaches w before t_max
// (detected at a monitoring instant or exactly at a jump), else 0.
double first_passage_discount(Rng& rng, const ModelParams& mp, double w,
                              double r, double t_max) {
  const bool up = w > 0;
  const auto crossed = [&](double x) { return up ? x >= w : x <= w; };

  const double s2 = mp.sigma * mp.sigma;
  const double h_floor = 1e-4 * (w * w) / s2;

  double x = 0.0;
  double t = 0.0;
  double t_jump = mp.lambda > 0 ? rng.exponential() / mp.lambda : kInf;

  while (t < t_max) {
    const double d = w - x;
    double h = std::max(0.1 * (d * d) / s2, h_floor);
    const double t_event = std::min(t_jump, t_max);
    if (t + h >= t_event) {
      const double dt = t_event - t;
      if (dt > 0) x += mp.mu_hat * dt + mp.sigma * std::sqrt(dt) * rng.normal();
      t = t_event;
      if (crossed(x)) return std::exp(-r * t);
      if (t >= t_max) return 0.0;
      // Jump instant: the post-jump state is checked exactly, so overshoot
      // passages carry no discretization error.
      x += draw_jump(rng, mp);
      if (crossed(x)) return std::exp(-r * t);
      t_jump = t + rng.exponential() / mp.lambda;
    } else {
      x += mp.mu_hat * h + mp.sigma * std::sqrt(h) * rng.normal();
      t += h;
      if (crossed(x)) return std::exp(-r * t);
    }
  }
  return 0.0;
}

struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

FirstPassageEstimate mc_first_passage(const PathSpec& spec, double barrier,
                                      double r, std::int64_t n_paths,
                                      double t_max, int n_threads) {
  const ModelParams mp = effective_params(spec);
  if (!(barrier > 0)) throw Error(ErrorKind::domain, "barrier must be positive");
  if (!(r > 0)) throw Error(ErrorKind::domain, "discount rate must be positive");
  if (n_paths <= 0) throw Error(ErrorKind::domain, "n_paths must be positive");
  if (t_max <= 0) t_max = std::log(1e6) / r;

  FirstPassageEstimate est;
  est.n_paths = n_paths;
  est.t_max = t_max;

  const double w = std::log(barrier / spec.s0);
  if (w == 0.0) {
    est.mean_discount = 1.0;
    return est;
  }

  constexpr std::int64_t kChunk = 1024;
  const std::int64_t n_chunks = (n_paths + kChunk - 1) / kChunk;
  std::vector<double> chunk_sum(static_cast<std::size_t>(n_chunks), 0.0);
  std::vector<double> chunk_sum2(static_cast<std::size_t>(n_chunks), 0.0);

  const auto run_chunks = [&](std::int64_t first, std::int64_t stride) {
    for (std::int64_t c = first; c < n_chunks; c += stride) {
      KahanSum s, s2;
      const std::int64_t lo = c * kChunk;
      const std::int64_t hi = std::min(n_paths, lo + kChunk);
      for (std::int64_t i = lo; i < hi; ++i) {
        Rng rng(spec.seed, static_cast<std::uint64_t>(i));
        const double g = first_passage_discount(rng, mp, w, r, t_max);
        s.add(g);
        s2.add(g * g);
      }
      chunk_sum[static_cast<std::size_t>(c)] = s.sum;
      chunk_sum2[static_cast<std::size_t>(c)] = s2.sum;
    }
  };

  int workers = n_threads > 0
                    ? n_threads
                    : std::max(1u, std::thread::hardware_concurrency());
  if (static_cast<std::int64_t>(workers) > n_chunks)
    workers = static_cast<int>(n_chunks);
  if (workers <= 1) {
    run_chunks(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int wi = 0; wi < workers; ++wi)
      pool.emplace_back(run_chunks, wi, workers);
    for (auto& th : pool) th.join();
  }

  KahanSum total, total2;
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    total.add(chunk_sum[static_cast<std::size_t>(c)]);
    total2.add(chunk_sum2[static_cast<std::size_t>(c)]);
  }

  const double n = static_cast<double>(n_paths);
  est.mean_discount = total.sum / n;
  const double var =
      std::max(0.0, total2.sum / n - est.mean_discount * est.mean_discount);
  est.std_error = std::sqrt(var / n);
  return est;
}

// -----------------------------------------------------------------------------
// Synthetic raw feed
// -----------------------------------------------------------------------------

std::string synth_lob_day(const PathSpec& path_spec, const SynthBookSpec& book) {
  if (book.depth <= 0 || !(book.tick > 0) || book.dt_event_ms <= 0 ||
      book.min_size <= 0 || book.max_size < book.min_size)
    throw Error(ErrorKind::config, "invalid synthetic book spec");

  PathSpec ps = path_spec;
  ps.grid_dt_s = static_cast<double>(book.dt_event_ms) / 1000.0;
  const SimulatedPath path = simulate_path(ps);

  Rng size_rng(path_spec.seed, /*stream=*/0x5A11CE);
  const auto draw_size = [&]() {
    const auto span =
        static_cast<std::uint64_t>(book.max_size - book.min_size + 1);
    return book.min_size + static_cast<std::int64_t>(size_rng.next_u64() % span);
  };

  struct Level {
    std::int64_t bid = -1, ask = -1;  // ticks; -1 = not yet emitted
    std::int64_t bid_size = 0, ask_size = 0;
  };
  std::vector<Level> state(static_cast<std::size_t>(book.depth));

  std::string out;
  out.reserve(path.grid_s.size() * 24);
  for (std::size_t k = 0; k < path.grid_s.size(); ++k) {
    const std::int64_t ts =
        book.start_ts_ms + static_cast<std::int64_t>(k) * book.dt_event_ms;
    // One-tick spread straddling the path value: mid = (bid + ask)/2 is
    // within tick/2 of the simulated price.
    const auto bid0 =
        static_cast<std::int64_t>(std::llround(path.grid_s[k] / book.tick - 0.5));
    const std::int64_t ask0 = bid0 + 1;
    if (bid0 - (book.depth - 1) <= 0)
      throw Error(ErrorKind::domain, "path too close to zero for book depth");
    for (int lvl = 0; lvl < book.depth; ++lvl) {
      Level& st = state[static_cast<std::size_t>(lvl)];
      const std::int64_t bp = bid0 - lvl;
      const std::int64_t ap = ask0 + lvl;
      if (bp == st.bid && ap == st.ask) continue;
      if (bp != st.bid) st.bid_size = draw_size();
      if (ap != st.ask) st.ask_size = draw_size();
      st.bid = bp;
      st.ask = ap;
      out += format_ts(ts);
      out += ';';
      out += std::to_string(lvl);
      out += ';';
      out += format_price(bp, book.tick);
      out += ';';
      out += format_price(ap, book.tick);
      out += ';';
      out += std::to_string(st.bid_size);
      out += ';';
      out += std::to_string(st.ask_size);
      out += '\n';
    }
  }
  return out;
}

}  // namespace lobcal
