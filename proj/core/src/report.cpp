// -----------------------------------------------------------------------------
// report.cpp
// -----------------------------------------------------------------------------

#include "lobcal/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>

#include "lobcal/csv.hpp"
#include "lobcal/errors.hpp"
#include "lobcal/rng.hpp"

namespace lobcal {

namespace fs = std::filesystem;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string file_stem(const std::string& path) {
  return fs::path(path).stem().string();
}

template <typename Body>
int run_command(std::ostream& log, const Body& body) {
  try {
    return body();
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::solver ? 2 : 1;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

void cell(std::string& out, double value, bool valid) {
  if (valid && std::isfinite(value)) out += format_double(value);
}

const char* side_name(Side s) { return s == Side::bid ? "bid" : "ask"; }
const char* model_name(Model m) { return m == Model::gbm ? "gbm" : "dejd"; }

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(pos));
      break;
    }
    cells.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return cells;
}

double parse_cell_double(const std::string& cell_text, long line_no) {
  double v = 0;
  const char* first = cell_text.data();
  const char* last = first + cell_text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw Error(ErrorKind::parse, "bad numeric cell '" + cell_text + "'", line_no);
  return v;
}

std::int64_t parse_cell_i64(const std::string& cell_text, long line_no) {
  std::int64_t v = 0;
  const char* first = cell_text.data();
  const char* last = first + cell_text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw Error(ErrorKind::parse, "bad integer cell '" + cell_text + "'", line_no);
  return v;
}

}  // namespace

std::string resolve_out_dir(const std::string& requested) {
  if (!requested.empty()) return requested;
  if (const char* env = std::getenv(kOutDirEnvVar); env && *env) return env;
  return ".";
}

// -----------------------------------------------------------------------------
// CSV codecs
// -----------------------------------------------------------------------------

std::string snapshots_to_csv(const std::vector<LobSnapshot>& snapshots,
                             const BookConfig& cfg) {
  std::string out = "ts_ms";
  for (int l = 0; l < cfg.depth; ++l) {
    const std::string tag = "l" + std::to_string(l);
    out += "," + tag + "_bp," + tag + "_ap," + tag + "_bs," + tag + "_as";
  }
  out += '\n';
  for (const auto& snap : snapshots) {
    out += std::to_string(snap.ts_ms);
    for (const auto& lvl : snap.levels) {
      out += ',';
      out += format_price(lvl.bid_ticks, cfg.tick);
      out += ',';
      out += format_price(lvl.ask_ticks, cfg.tick);
      out += ',';
      out += std::to_string(lvl.bid_size);
      out += ',';
      out += std::to_string(lvl.ask_size);
    }
    out += '\n';
  }
  return out;
}

std::string executions_to_csv(const std::vector<Execution>& executions,
                              double tick) {
  std::string out = "ts_ms,price,size\n";
  for (const auto& ex : executions) {
    out += std::to_string(ex.ts_ms);
    out += ',';
    out += format_price(ex.price_ticks, tick);
    out += ',';
    out += std::to_string(ex.size);
    out += '\n';
  }
  return out;
}

std::string estimators_to_csv(const RollingStats& stats) {
  std::string out = "ts,mbar,sbar,rv,bv,bv_capped\n";
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const bool ok = stats.valid[i] != 0;
    out += std::to_string(stats.ts_ms[i]);
    out += ',';
    cell(out, stats.mbar[i], ok);
    out += ',';
    cell(out, stats.sbar[i], ok);
    out += ',';
    cell(out, stats.rv[i], ok);
    out += ',';
    cell(out, stats.bv[i], ok);
    out += ',';
    cell(out, stats.bv_capped[i], ok);
    out += '\n';
  }
  return out;
}

std::string results_to_csv(const FitResult& fit) {
  std::string out = "ts,r_bid,r_ask,U_bid,U_ask,sigma,lambda,p,eta1,eta2,valid\n";
  const std::size_t n = fit.ts_ms.size();
  const bool dejd = fit.model == Model::dejd;
  for (std::size_t i = 0; i < n; ++i) {
    const bool b_ok = i < fit.bid.valid.size() && fit.bid.valid[i];
    const bool a_ok = i < fit.ask.valid.size() && fit.ask.valid[i];
    out += std::to_string(fit.ts_ms[i]);
    out += ',';
    cell(out, b_ok ? fit.bid.r[i] : kNan, b_ok);
    out += ',';
    cell(out, a_ok ? fit.ask.r[i] : kNan, a_ok);
    out += ',';
    cell(out, b_ok ? fit.bid.u[i] : kNan, b_ok);
    out += ',';
    cell(out, a_ok ? fit.ask.u[i] : kNan, a_ok);
    out += ',';
    cell(out, i < fit.sigma.size() ? fit.sigma[i] : kNan, true);
    out += ',';
    cell(out, dejd && i < fit.lambda.size() ? fit.lambda[i] : kNan, dejd);
    out += ',';
    cell(out, dejd && i < fit.p.size() ? fit.p[i] : kNan, dejd);
    out += ',';
    cell(out, dejd && i < fit.eta1.size() ? fit.eta1[i] : kNan, dejd);
    out += ',';
    cell(out, dejd && i < fit.eta2.size() ? fit.eta2[i] : kNan, dejd);
    out += ',';
    out += (b_ok && a_ok) ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string smile_to_csv(const SmileResult& smile) {
  std::string out = "moneyness,sigma_implied,side,ts\n";
  for (const auto& pt : smile.points) {
    out += format_double(pt.moneyness);
    out += ',';
    out += format_double(pt.sigma_implied);
    out += ',';
    out += side_name(pt.side);
    out += ',';
    out += std::to_string(pt.ts_ms);
    out += '\n';
  }
  return out;
}

std::string diagnostics_to_csv(const Diagnostics& diag) {
  std::string out = "ts,side,z,r,log10_z,log10_r,segment\n";
  for (const auto& pt : diag.points) {
    out += std::to_string(pt.ts_ms);
    out += ',';
    out += side_name(pt.side);
    out += ',';
    out += format_double(pt.z);
    out += ',';
    out += format_double(pt.r);
    out += ',';
    out += format_double(std::log10(pt.z));
    out += ',';
    out += format_double(std::log10(pt.r));
    out += ',';
    out += std::to_string(pt.segment);
    out += '\n';
  }
  return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows, bool mean_row) {
  static const char* kModels[2] = {"gbm", "dejd"};
  static const char* kSides[2] = {"bid", "ask"};
  static const char* kStats[4] = {"r_mean", "r_std", "u_mean", "u_std"};

  std::string out = "date";
  for (const char* m : kModels)
    for (const char* s : kSides)
      for (const char* st : kStats)
        out += std::string(",") + m + "_" + s + "_" + st;
  out += '\n';

  const auto stat_values = [](const DailySummary& d) {
    return std::array<double, 4>{d.r_mean, d.r_std, d.u_mean, d.u_std};
  };

  constexpr int kCols = 16;
  double col_sum[kCols] = {};
  int col_n[kCols] = {};

  for (const auto& row : rows) {
    out += row.date;
    const DailySummary* cells[4] = {&row.gbm_bid, &row.gbm_ask, &row.dejd_bid,
                                    &row.dejd_ask};
    const bool present[4] = {row.has_gbm, row.has_gbm, row.has_dejd,
                             row.has_dejd};
    int col = 0;
    for (int g = 0; g < 4; ++g) {
      const auto vals = stat_values(*cells[g]);
      for (double v : vals) {
        out += ',';
        if (present[g]) {
          out += format_double(v);
          col_sum[col] += v;
          ++col_n[col];
        }
        ++col;
      }
    }
    out += '\n';
  }

  if (mean_row && !rows.empty()) {
    out += "Mean";
    for (int col = 0; col < kCols; ++col) {
      out += ',';
      if (col_n[col] > 0) out += format_double(col_sum[col] / col_n[col]);
    }
    out += '\n';
  }
  return out;
}

FitResult parse_results_csv(const std::string& text) {
  FitResult fit;
  fit.model = Model::gbm;
  std::size_t pos = 0;
  long line_no = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line.rfind("ts,", 0) != 0)
        throw Error(ErrorKind::parse, "unexpected results header", line_no);
      header_seen = true;
      continue;
    }
    const auto cells = split_line(line);
    if (cells.size() != 11)
      throw Error(ErrorKind::parse, "expected 11 result columns", line_no);
    fit.ts_ms.push_back(parse_cell_i64(cells[0], line_no));
    const bool b_ok = !cells[1].empty();
    const bool a_ok = !cells[2].empty();
    fit.bid.r.push_back(b_ok ? parse_cell_double(cells[1], line_no) : kNan);
    fit.ask.r.push_back(a_ok ? parse_cell_double(cells[2], line_no) : kNan);
    fit.bid.u.push_back(b_ok ? parse_cell_double(cells[3], line_no) : kNan);
    fit.ask.u.push_back(a_ok ? parse_cell_double(cells[4], line_no) : kNan);
    fit.bid.valid.push_back(b_ok ? 1 : 0);
    fit.ask.valid.push_back(a_ok ? 1 : 0);
    fit.sigma.push_back(cells[5].empty() ? kNan
                                         : parse_cell_double(cells[5], line_no));
    fit.lambda.push_back(cells[6].empty() ? kNan
                                          : parse_cell_double(cells[6], line_no));
    fit.p.push_back(cells[7].empty() ? kNan : parse_cell_double(cells[7], line_no));
    fit.eta1.push_back(cells[8].empty() ? kNan
                                        : parse_cell_double(cells[8], line_no));
    fit.eta2.push_back(cells[9].empty() ? kNan
                                        : parse_cell_double(cells[9], line_no));
    if (!cells[6].empty()) fit.model = Model::dejd;
  }
  if (!header_seen) throw Error(ErrorKind::parse, "empty results file");
  return fit;
}

// -----------------------------------------------------------------------------
// Commands
// -----------------------------------------------------------------------------

namespace {

struct IngestedDay {
  ParseResult parsed;
  std::vector<LobSnapshot> snapshots;
};

IngestedDay ingest_file(const std::string& input_path, const BookConfig& book,
                        std::ostream& log) {
  IngestedDay day;
  day.parsed = parse_raw(read_text_file(input_path), book);
  for (const auto& w : day.parsed.warnings) log << "warning: " << w << "\n";
  day.snapshots = reconstruct(day.parsed.updates, book);
  return day;
}

void add_book_entries(std::vector<std::pair<std::string, std::string>>& m,
                      const BookConfig& book) {
  m.emplace_back("depth", std::to_string(book.depth));
  m.emplace_back("tick", format_double(book.tick));
}

void add_fit_entries(std::vector<std::pair<std::string, std::string>>& m,
                     const FitConfig& cfg) {
  m.emplace_back("dt_s", format_double(cfg.dt_s));
  m.emplace_back("window_n", std::to_string(cfg.window_n));
  m.emplace_back("steps", std::to_string(cfg.steps));
  m.emplace_back("r_min", format_double(cfg.r_min));
  m.emplace_back("r0", format_double(cfg.r0));
  if (cfg.u0) m.emplace_back("u0", format_double(*cfg.u0));
  if (cfg.u0_bid) m.emplace_back("u0_bid", format_double(*cfg.u0_bid));
  m.emplace_back("eps", format_double(cfg.eps));
  m.emplace_back("delta", format_double(cfg.delta));
  m.emplace_back("time_unit_s", format_double(cfg.time_unit_s));
  m.emplace_back("level", std::to_string(cfg.level));
  m.emplace_back("start_mode", cfg.start_mode == StartMode::mid
                                   ? "mid"
                                   : "relevant_best");
  m.emplace_back("gbm_sigma_source",
                 cfg.gbm_sigma_source == SigmaSource::bipower ? "bipower"
                                                              : "rolling_std");
  m.emplace_back("eta_cont_eps", format_double(cfg.eta_cont_eps));
  m.emplace_back("eta_equal", cfg.eta_equal ? "1" : "0");
  m.emplace_back("invalid_budget", format_double(cfg.invalid_budget));
}

}  // namespace

int cmd_ingest(const IngestArgs& args, std::ostream& log) {
  return run_command(log, [&]() {
    const IngestedDay day = ingest_file(args.input_path, args.book, log);
    const auto executions = detect_executions(day.snapshots);
    const std::string out_dir = resolve_out_dir(args.out_dir);

    write_text_file(join(out_dir, args.snapshots_csv),
                    snapshots_to_csv(day.snapshots, args.book));
    write_text_file(join(out_dir, args.executions_csv),
                    executions_to_csv(executions, args.book.tick));

    std::vector<std::pair<std::string, std::string>> m;
    m.emplace_back("command", "ingest");
    m.emplace_back("version", kVersion);
    m.emplace_back("input", args.input_path);
    add_book_entries(m, args.book);
    m.emplace_back("n_updates", std::to_string(day.parsed.updates.size()));
    m.emplace_back("n_snapshots", std::to_string(day.snapshots.size()));
    m.emplace_back("n_executions", std::to_string(executions.size()));
    m.emplace_back("skipped_deep_levels",
                   std::to_string(day.parsed.skipped_deep_levels));
    m.emplace_back("non_monotone_timestamps",
                   std::to_string(day.parsed.non_monotone_timestamps));
    m.emplace_back("out_snapshots", args.snapshots_csv);
    m.emplace_back("out_executions", args.executions_csv);
    write_text_file(join(out_dir, "manifest_ingest.txt"), render_manifest(m));

    log << "ingest: " << day.parsed.updates.size() << " updates -> "
        << day.snapshots.size() << " snapshots, " << executions.size()
        << " executions\n";
    return 0;
  });
}

int cmd_fit(const FitArgs& args, std::ostream& log) {
  return run_command(log, [&]() {
    const IngestedDay day = ingest_file(args.input_path, args.book, log);
    const ResampledSeries series =
        resample(day.snapshots, args.fit.dt_s, args.book);
    const RollingStats stats = rolling_stats(series, args.fit.window_n);
    const std::string out_dir = resolve_out_dir(args.out_dir);
    const std::string date =
        args.date.empty() ? file_stem(args.input_path) : args.date;

    write_text_file(join(out_dir, "estimators.csv"), estimators_to_csv(stats));

    std::size_t n_fittable = 0;
    for (std::size_t i = 0; i < series.size(); ++i)
      if (series.valid[i] && stats.valid[i]) ++n_fittable;

    std::vector<std::pair<std::string, std::string>> m;
    m.emplace_back("command", "fit");
    m.emplace_back("version", kVersion);
    m.emplace_back("input", args.input_path);
    m.emplace_back("date", date);
    add_book_entries(m, args.book);
    add_fit_entries(m, args.fit);
    m.emplace_back("n_grid", std::to_string(series.size()));
    m.emplace_back("n_fittable", std::to_string(n_fittable));

    int exit_code = 0;
    const auto finish_model = [&](const FitResult& fit) {
      const char* name = model_name(fit.model);
      write_text_file(join(out_dir, std::string("results_") + name + ".csv"),
                      results_to_csv(fit));
      const Diagnostics diag = diagnostics(series, stats, fit, args.fit);
      write_text_file(
          join(out_dir, std::string("diagnostics_") + name + ".csv"),
          diagnostics_to_csv(diag));

      std::size_t accepted = 0;
      for (std::size_t i = 0; i < fit.ts_ms.size(); ++i)
        if (fit.bid.valid[i] && fit.ask.valid[i]) ++accepted;
      const double invalid_fraction =
          n_fittable == 0
              ? 1.0
              : 1.0 - static_cast<double>(accepted) /
                          static_cast<double>(n_fittable);

      const std::string prefix = name;
      m.emplace_back(prefix + "_accepted", std::to_string(accepted));
      m.emplace_back(prefix + "_blocks_above_eps",
                     std::to_string(fit.blocks_above_eps));
      m.emplace_back(prefix + "_invalid_fraction",
                     format_double(invalid_fraction));
      m.emplace_back(prefix + "_pooled_alpha", format_double(diag.pooled.alpha));
      m.emplace_back(prefix + "_pooled_t", format_double(diag.pooled.t_stat));
      m.emplace_back(prefix + "_n_segments",
                     std::to_string(diag.segments.size()));

      const DailySummary bid = daily_summary(fit.bid);
      const DailySummary ask = daily_summary(fit.ask);
      m.emplace_back(prefix + "_bid_r_mean", format_double(bid.r_mean));
      m.emplace_back(prefix + "_ask_r_mean", format_double(ask.r_mean));

      log << "fit " << name << ": " << accepted << "/" << n_fittable
          << " points, mean r bid " << format_double(bid.r_mean) << " ask "
          << format_double(ask.r_mean) << "\n";
      if (invalid_fraction > args.fit.invalid_budget) {
        log << "fit " << name << ": invalid fraction "
            << format_double(invalid_fraction) << " exceeds budget "
            << format_double(args.fit.invalid_budget) << "\n";
        exit_code = 2;
      }
    };

    if (args.model == FitModel::gbm || args.model == FitModel::both) {
      const FitResult bid_fit = fit_gbm(series, stats, Side::bid, args.fit);
      const FitResult ask_fit = fit_gbm(series, stats, Side::ask, args.fit);
      FitResult merged = bid_fit;
      merged.ask = ask_fit.ask;
      merged.blocks_above_eps += ask_fit.blocks_above_eps;
      for (std::size_t i = 0; i < merged.sigma.size(); ++i)
        if (!std::isfinite(merged.sigma[i])) merged.sigma[i] = ask_fit.sigma[i];
      finish_model(merged);
    }
    if (args.model == FitModel::dejd || args.model == FitModel::both) {
      finish_model(fit_dejd(series, stats, args.fit));
    }

    write_text_file(join(out_dir, "manifest_fit.txt"), render_manifest(m));
    return exit_code;
  });
}

int cmd_smile(const SmileArgs& args, std::ostream& log) {
  return run_command(log, [&]() {
    const IngestedDay day = ingest_file(args.input_path, args.book, log);
    const ResampledSeries series =
        resample(day.snapshots, args.fit.dt_s, args.book);
    const RollingStats stats = rolling_stats(series, args.fit.window_n);
    const std::string out_dir = resolve_out_dir(args.out_dir);

    const SmileResult smile =
        extract_smile(series, stats, args.r, args.c, args.fit);
    write_text_file(join(out_dir, args.smile_csv), smile_to_csv(smile));

    std::vector<std::pair<std::string, std::string>> m;
    m.emplace_back("command", "smile");
    m.emplace_back("version", kVersion);
    m.emplace_back("input", args.input_path);
    add_book_entries(m, args.book);
    m.emplace_back("r", format_double(args.r));
    m.emplace_back("c", format_double(args.c));
    m.emplace_back("dt_s", format_double(args.fit.dt_s));
    m.emplace_back("window_n", std::to_string(args.fit.window_n));
    m.emplace_back("time_unit_s", format_double(args.fit.time_unit_s));
    m.emplace_back("n_points", std::to_string(smile.points.size()));
    m.emplace_back("n_skipped", std::to_string(smile.n_skipped));
    m.emplace_back("out_smile", args.smile_csv);
    write_text_file(join(out_dir, "manifest_smile.txt"), render_manifest(m));

    log << "smile: " << smile.points.size() << " points, " << smile.n_skipped
        << " skipped\n";
    return 0;
  });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& log) {
  return run_command(log, [&]() {
    const std::string out_dir = resolve_out_dir(args.out_dir);

    std::size_t n_rows = 0;
    if (args.raw_feed) {
      const std::string feed = synth_lob_day(args.path, args.book);
      write_text_file(join(out_dir, args.out_name), feed);
      for (char ch : feed) n_rows += ch == '\n';
    } else {
      const SimulatedPath path = simulate_path(args.path);
      std::string out = "ts_ms,price\n";
      for (std::size_t k = 0; k < path.grid_t_s.size(); ++k) {
        out += std::to_string(
            args.book.start_ts_ms +
            static_cast<std::int64_t>(std::llround(path.grid_t_s[k] * 1000.0)));
        out += ',';
        out += format_double(path.grid_s[k]);
        out += '\n';
      }
      write_text_file(join(out_dir, args.out_name), out);
      n_rows = path.grid_t_s.size();
    }

    std::vector<std::pair<std::string, std::string>> m;
    m.emplace_back("command", "simulate");
    m.emplace_back("version", kVersion);
    m.emplace_back("model", model_name(args.path.model));
    m.emplace_back("mu", format_double(args.path.params.mu));
    m.emplace_back("sigma", format_double(args.path.params.sigma));
    if (args.path.model == Model::dejd) {
      m.emplace_back("lambda", format_double(args.path.params.lambda));
      m.emplace_back("p", format_double(args.path.params.p));
      m.emplace_back("eta1", format_double(args.path.params.eta1));
      m.emplace_back("eta2", format_double(args.path.params.eta2));
    }
    m.emplace_back("s0", format_double(args.path.s0));
    m.emplace_back("horizon_s", format_double(args.path.horizon_s));
    m.emplace_back("time_unit_s", format_double(args.path.time_unit_s));
    m.emplace_back("seed", std::to_string(args.path.seed));
    m.emplace_back("rng", kRngAlgorithm);
    if (args.raw_feed) {
      add_book_entries(m, BookConfig{args.book.depth, args.book.tick});
      m.emplace_back("dt_event_ms", std::to_string(args.book.dt_event_ms));
      m.emplace_back("start_ts_ms", std::to_string(args.book.start_ts_ms));
      m.emplace_back("format", "raw_feed");
    } else {
      m.emplace_back("grid_dt_s", format_double(args.path.grid_dt_s));
      m.emplace_back("format", "grid_csv");
    }
    m.emplace_back("rows", std::to_string(n_rows));
    m.emplace_back("out", args.out_name);
    write_text_file(join(out_dir, "manifest_simulate.txt"), render_manifest(m));

    log << "simulate: wrote " << n_rows << " rows to " << args.out_name << "\n";
    return 0;
  });
}

int cmd_summary(const SummaryArgs& args, std::ostream& log) {
  return run_command(log, [&]() {
    if (args.results_paths.empty())
      throw Error(ErrorKind::config, "summary needs at least one results file");
    if (!args.dates.empty() && args.dates.size() != args.results_paths.size())
      throw Error(ErrorKind::config,
                  "dates must be empty or match the results list");

    std::vector<SummaryRow> rows;
    std::map<std::string, std::size_t> row_index;
    for (std::size_t k = 0; k < args.results_paths.size(); ++k) {
      const std::string& path = args.results_paths[k];
      const FitResult fit = parse_results_csv(read_text_file(path));
      std::string date =
          k < args.dates.size() ? args.dates[k] : file_stem(path);
      // Strip the model suffix cmd_fit appends, so the gbm and dejd results
      // of one day land in one row.
      for (const char* suffix : {"_results_gbm", "_results_dejd", "results_gbm",
                                 "results_dejd"}) {
        const std::string s(suffix);
        if (date.size() > s.size() &&
            date.compare(date.size() - s.size(), s.size(), s) == 0) {
          date = date.substr(0, date.size() - s.size());
          break;
        }
      }
      if (date.empty()) date = file_stem(path);

      auto [it, inserted] = row_index.try_emplace(date, rows.size());
      if (inserted) {
        rows.emplace_back();
        rows.back().date = date;
      }
      SummaryRow& row = rows[it->second];
      if (fit.model == Model::gbm) {
        row.has_gbm = true;
        row.gbm_bid = daily_summary(fit.bid);
        row.gbm_ask = daily_summary(fit.ask);
      } else {
        row.has_dejd = true;
        row.dejd_bid = daily_summary(fit.bid);
        row.dejd_ask = daily_summary(fit.ask);
      }
    }

    const std::string out_dir = resolve_out_dir(args.out_dir);
    write_text_file(join(out_dir, args.out_name),
                    summary_to_csv(rows, /*mean_row=*/true));

    std::vector<std::pair<std::string, std::string>> m;
    m.emplace_back("command", "summary");
    m.emplace_back("version", kVersion);
    m.emplace_back("n_inputs", std::to_string(args.results_paths.size()));
    m.emplace_back("n_rows", std::to_string(rows.size()));
    m.emplace_back("out", args.out_name);
    write_text_file(join(out_dir, "manifest_summary.txt"), render_manifest(m));

    log << "summary: " << rows.size() << " day rows -> " << args.out_name
        << "\n";
    return 0;
  });
}

}  // namespace lobcal
