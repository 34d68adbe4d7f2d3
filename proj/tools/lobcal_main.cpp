// -----------------------------------------------------------------------------
// lobcal command-line interface
// -----------------------------------------------------------------------------
//
//   lobcal ingest   <raw feed>   -> snapshots.csv, executions.csv
//   lobcal fit      <raw feed>   -> estimators.csv, results_*.csv, diagnostics_*.csv
//   lobcal smile    <raw feed>   -> smile.csv
//   lobcal simulate              -> synthetic raw feed or grid CSV
//   lobcal summary  <results...> -> summary.csv
//
// Every command also writes a manifest_<command>.txt run record. Exit codes:
// 0 success, 1 input/parse/config error, 2 numerical failure or an invalid
// fraction beyond the configured budget.
// -----------------------------------------------------------------------------

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lobcal/report.hpp"

namespace {

void add_book_options(CLI::App* cmd, lobcal::BookConfig& book) {
  cmd->add_option("--depth", book.depth, "Price levels per side")
      ->capture_default_str();
  cmd->add_option("--tick", book.tick, "Quote price increment")
      ->capture_default_str();
}

void add_fit_options(CLI::App* cmd, lobcal::FitConfig& fit) {
  cmd->add_option("--dt", fit.dt_s, "Resampling step, seconds")
      ->capture_default_str();
  cmd->add_option("--window", fit.window_n, "Rolling window length")
      ->capture_default_str();
  cmd->add_option("--time-unit", fit.time_unit_s,
                  "Seconds per rate time unit")
      ->capture_default_str();
  cmd->add_option("--level", fit.level,
                  "Order level fed to the fit (-1 = deepest occupied)")
      ->capture_default_str();
  cmd->add_option("--start-mode", [&fit](const CLI::results_t& res) {
        if (res[0] == "mid") fit.start_mode = lobcal::StartMode::mid;
        else if (res[0] == "relevant_best")
          fit.start_mode = lobcal::StartMode::relevant_best;
        else return false;
        return true;
      },
      "Distance reference: relevant_best | mid");
}

void add_solver_options(CLI::App* cmd, lobcal::FitConfig& fit, double& u0,
                        double& u0_bid) {
  cmd->add_option("--steps", fit.steps, "Grid points per block")
      ->capture_default_str();
  cmd->add_option("--r-min", fit.r_min, "Lower bound of the rate search")
      ->capture_default_str();
  cmd->add_option("--r0", fit.r0, "Initial rate")->capture_default_str();
  cmd->add_option("--u0", u0, "Initial utility (default: model value at r0)");
  cmd->add_option("--u0-bid", u0_bid, "Bid-side initial utility override");
  cmd->add_option("--eps", fit.eps, "Convergence-report threshold")
      ->capture_default_str();
  cmd->add_option("--delta", fit.delta, "Inner solver tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", fit.max_iter, "Inner solver iteration cap")
      ->capture_default_str();
  cmd->add_option("--sigma-min", fit.sigma_min, "Volatility floor")
      ->capture_default_str();
  cmd->add_option("--eta-cont-eps", fit.eta_cont_eps,
                  "Allowed squared eta step between points")
      ->capture_default_str();
  cmd->add_flag("--eta-equal", fit.eta_equal, "Force eta1 == eta2");
  cmd->add_option("--lambda-cont-eps", fit.lambda_cont_eps,
                  "Squared-step cap on lambda (-1 = off)")
      ->capture_default_str();
  cmd->add_option("--p-cont-eps", fit.p_cont_eps,
                  "Squared-step cap on p (-1 = off)")
      ->capture_default_str();
  cmd->add_option("--sigma-source", [&fit](const CLI::results_t& res) {
        if (res[0] == "rolling_std")
          fit.gbm_sigma_source = lobcal::SigmaSource::rolling_std;
        else if (res[0] == "bipower")
          fit.gbm_sigma_source = lobcal::SigmaSource::bipower;
        else return false;
        return true;
      },
      "GBM volatility source: rolling_std | bipower");
  cmd->add_option("--invalid-budget", fit.invalid_budget,
                  "Tolerated invalid fraction before exit code 2")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limit-order-book rate calibration toolkit"};
  app.set_version_flag("--version", std::string(lobcal::kVersion));
  app.require_subcommand(1);

  // --- ingest ---------------------------------------------------------------
  lobcal::IngestArgs ingest;
  CLI::App* c_ingest =
      app.add_subcommand("ingest", "Rebuild book snapshots from a raw feed");
  c_ingest->add_option("input", ingest.input_path, "Raw update feed")
      ->required();
  c_ingest->add_option("--out-dir", ingest.out_dir, "Output directory");
  add_book_options(c_ingest, ingest.book);
  c_ingest->add_option("--snapshots-name", ingest.snapshots_csv,
                       "Snapshot CSV filename")
      ->capture_default_str();
  c_ingest->add_option("--executions-name", ingest.executions_csv,
                       "Executions CSV filename")
      ->capture_default_str();

  // --- fit --------------------------------------------------------------------
  lobcal::FitArgs fit;
  double fit_u0 = -1.0, fit_u0_bid = -1.0;
  std::string fit_model = "both";
  CLI::App* c_fit = app.add_subcommand("fit", "Fit impatience rates");
  c_fit->add_option("input", fit.input_path, "Raw update feed")->required();
  c_fit->add_option("--out-dir", fit.out_dir, "Output directory");
  c_fit->add_option("--model", fit_model, "gbm | dejd | both")
      ->check(CLI::IsMember({"gbm", "dejd", "both"}))
      ->capture_default_str();
  c_fit->add_option("--date", fit.date, "Row label for summaries");
  add_book_options(c_fit, fit.book);
  add_fit_options(c_fit, fit.fit);
  add_solver_options(c_fit, fit.fit, fit_u0, fit_u0_bid);

  // --- smile ------------------------------------------------------------------
  lobcal::SmileArgs smile;
  CLI::App* c_smile =
      app.add_subcommand("smile", "Extract the book-implied volatility smile");
  c_smile->add_option("input", smile.input_path, "Raw update feed")->required();
  c_smile->add_option("--out-dir", smile.out_dir, "Output directory");
  c_smile->add_option("-r,--rate", smile.r, "Fixed discount rate")
      ->capture_default_str();
  c_smile->add_option("-c,--target", smile.c, "Fixed target utility")
      ->capture_default_str();
  c_smile->add_option("--out-name", smile.smile_csv, "Smile CSV filename")
      ->capture_default_str();
  add_book_options(c_smile, smile.book);
  add_fit_options(c_smile, smile.fit);

  // --- simulate ---------------------------------------------------------------
  lobcal::SimulateArgs sim;
  std::string sim_model = "gbm";
  bool grid_csv = false;
  CLI::App* c_sim =
      app.add_subcommand("simulate", "Generate a synthetic raw feed");
  c_sim->add_option("--out-dir", sim.out_dir, "Output directory");
  c_sim->add_option("--out-name", sim.out_name, "Output filename")
      ->capture_default_str();
  c_sim->add_option("--model", sim_model, "gbm | dejd")
      ->check(CLI::IsMember({"gbm", "dejd"}))
      ->capture_default_str();
  c_sim->add_option("--mu", sim.path.params.mu, "Drift per time unit")
      ->capture_default_str();
  c_sim->add_option("--sigma", sim.path.params.sigma,
                    "Volatility per sqrt(time unit)")
      ->capture_default_str();
  c_sim->add_option("--lambda", sim.path.params.lambda,
                    "Jump intensity per time unit")
      ->capture_default_str();
  c_sim->add_option("-p", sim.path.params.p, "Up-jump probability")
      ->capture_default_str();
  c_sim->add_option("--eta1", sim.path.params.eta1, "Up-jump rate")
      ->capture_default_str();
  c_sim->add_option("--eta2", sim.path.params.eta2, "Down-jump rate")
      ->capture_default_str();
  c_sim->add_option("--s0", sim.path.s0, "Starting price")
      ->capture_default_str();
  c_sim->add_option("--horizon", sim.path.horizon_s, "Session length, seconds")
      ->capture_default_str();
  c_sim->add_option("--time-unit", sim.path.time_unit_s,
                    "Seconds per rate time unit")
      ->capture_default_str();
  c_sim->add_option("--seed", sim.path.seed, "Random seed")
      ->capture_default_str();
  c_sim->add_option("--event-dt-ms", sim.book.dt_event_ms,
                    "Feed timestamp spacing, ms")
      ->capture_default_str();
  c_sim->add_option("--start-ts-ms", sim.book.start_ts_ms,
                    "First timestamp, ms since midnight")
      ->capture_default_str();
  c_sim->add_option("--min-size", sim.book.min_size, "Smallest quoted size")
      ->capture_default_str();
  c_sim->add_option("--max-size", sim.book.max_size, "Largest quoted size")
      ->capture_default_str();
  c_sim->add_option("--depth", sim.book.depth, "Price levels per side")
      ->capture_default_str();
  c_sim->add_option("--tick", sim.book.tick, "Quote price increment")
      ->capture_default_str();
  c_sim->add_option("--grid-dt", sim.path.grid_dt_s,
                    "Grid spacing for --grid-csv, seconds")
      ->capture_default_str();
  c_sim->add_flag("--grid-csv", grid_csv,
                  "Write a ts_ms,price grid CSV instead of a raw feed");

  // --- summary ----------------------------------------------------------------
  lobcal::SummaryArgs summary;
  CLI::App* c_summary =
      app.add_subcommand("summary", "Aggregate fit results across days");
  c_summary->add_option("results", summary.results_paths, "results_*.csv files")
      ->required();
  c_summary->add_option("--dates", summary.dates, "Row labels, one per input");
  c_summary->add_option("--out-dir", summary.out_dir, "Output directory");
  c_summary->add_option("--out-name", summary.out_name, "Summary CSV filename")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*c_ingest) return lobcal::cmd_ingest(ingest, std::cout);
  if (*c_fit) {
    if (fit_u0 >= 0) fit.fit.u0 = fit_u0;
    if (fit_u0_bid >= 0) fit.fit.u0_bid = fit_u0_bid;
    fit.model = fit_model == "gbm"    ? lobcal::FitModel::gbm
                : fit_model == "dejd" ? lobcal::FitModel::dejd
                                      : lobcal::FitModel::both;
    return lobcal::cmd_fit(fit, std::cout);
  }
  if (*c_smile) return lobcal::cmd_smile(smile, std::cout);
  if (*c_sim) {
    sim.path.model =
        sim_model == "dejd" ? lobcal::Model::dejd : lobcal::Model::gbm;
    sim.raw_feed = !grid_csv;
    return lobcal::cmd_simulate(sim, std::cout);
  }
  if (*c_summary) return lobcal::cmd_summary(summary, std::cout);
  return 1;
}
