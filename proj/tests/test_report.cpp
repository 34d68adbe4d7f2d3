// Command layer: CSV codecs, manifests, exit codes, and end-to-end
// determinism of the ingest -> fit -> smile pipeline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "lobcal/csv.hpp"
#include "lobcal/errors.hpp"
#include "lobcal/fitting.hpp"
#include "lobcal/report.hpp"
#include "lobcal/simulator.hpp"
#include "test_helpers.hpp"

using namespace lobcal;

namespace {

std::string read_file(const std::string& dir, const std::string& name) {
  return read_text_file((std::filesystem::path(dir) / name).string());
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// A two-point fit result with round CSV-friendly numbers.
FitResult tiny_fit(Model model, double r_bid, double r_ask, double u_bid,
                   double u_ask) {
  FitResult fit;
  fit.model = model;
  fit.ts_ms = {32400000, 32430000};
  for (int k = 0; k < 2; ++k) {
    fit.bid.r.push_back(r_bid);
    fit.bid.u.push_back(u_bid);
    fit.bid.valid.push_back(1);
    fit.ask.r.push_back(r_ask);
    fit.ask.u.push_back(u_ask);
    fit.ask.valid.push_back(1);
    fit.sigma.push_back(0.25);
    if (model == Model::dejd) {
      fit.lambda.push_back(1.5);
      fit.p.push_back(0.5);
      fit.eta1.push_back(3.5);
      fit.eta2.push_back(4.5);
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      fit.lambda.push_back(nan);
      fit.p.push_back(nan);
      fit.eta1.push_back(nan);
      fit.eta2.push_back(nan);
    }
  }
  return fit;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("formatting helpers render timestamps, prices and manifests") {
  CHECK(format_ts(50372367) == "13:59:32:367");
  CHECK(format_ts(32400000) == "09:00:00:000");
  CHECK(format_ts(0) == "00:00:00:000");

  CHECK(format_price(12047, 0.5) == "6023.5");
  CHECK(format_price(12048, 0.5) == "6024");
  CHECK(format_price(0, 0.5) == "0");

  CHECK(format_double(1.5) == "1.5");
  CHECK(format_double(0.0) == "0");
  for (double v : {0.1, -6000.25, 1e-12, 2.0 / 3.0}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);  // shortest round trip
  }

  const std::string manifest =
      render_manifest({{"command", "demo"}, {"alpha", "1"}, {"beta", "two"}});
  CHECK(manifest == "command=demo\nalpha=1\nbeta=two\n");
}

TEST_CASE("ingest writes the reference day bit for bit") {
  const std::string dir = testutil::scratch_dir("report_ingest");
  IngestArgs args;
  args.input_path = testutil::data_path("raw_lob_excerpt.txt");
  args.out_dir = dir;

  std::ostringstream log;
  REQUIRE(cmd_ingest(args, log) == 0);

  const std::string expected_snapshots =
      snapshots_to_csv(testutil::fixture_snapshots(), args.book);
  CHECK(read_file(dir, "snapshots.csv") == expected_snapshots);
  CHECK(read_file(dir, "executions.csv") ==
        "ts_ms,price,size\n50372397,6024,1\n");

  const std::string manifest = read_file(dir, "manifest_ingest.txt");
  CHECK(manifest.rfind("command=ingest\n", 0) == 0);
  CHECK(contains(manifest, "\nversion=1.0.0\n"));
  CHECK(contains(manifest, "\nn_snapshots=9\n"));
  CHECK(contains(manifest, "\nn_executions=1\n"));
}

TEST_CASE("simulate then fit then smile is deterministic across reruns") {
  const std::string dir_a = testutil::scratch_dir("report_run_a");
  const std::string dir_b = testutil::scratch_dir("report_run_b");
  std::ostringstream log;

  SimulateArgs sim;
  sim.out_dir = dir_a;
  sim.path.model = Model::dejd;
  sim.path.params = DejdParams{0.0, 0.01, 4.0, 0.4, 400.0, 500.0};
  sim.path.s0 = 6000.0;
  sim.path.horizon_s = 5400.0;
  sim.path.seed = 20260816;
  REQUIRE(cmd_simulate(sim, log) == 0);
  const std::string feed =
      (std::filesystem::path(dir_a) / "sim_feed.txt").string();

  FitArgs fit;
  fit.input_path = feed;
  fit.model = FitModel::both;
  fit.date = "2026-01-05";
  fit.out_dir = dir_a;
  REQUIRE(cmd_fit(fit, log) == 0);
  fit.out_dir = dir_b;
  REQUIRE(cmd_fit(fit, log) == 0);

  for (const char* name : {"estimators.csv", "results_gbm.csv",
                           "results_dejd.csv", "diagnostics_gbm.csv",
                           "diagnostics_dejd.csv"}) {
    const std::string a = read_file(dir_a, name);
    CHECK(a == read_file(dir_b, name));
    // More than a header: the day must actually produce rows.
    CHECK(std::count(a.begin(), a.end(), '\n') > 100);
  }

  const std::string manifest = read_file(dir_a, "manifest_fit.txt");
  CHECK(manifest.rfind("command=fit\n", 0) == 0);
  CHECK(contains(manifest, "\ndate=2026-01-05\n"));
  CHECK(contains(manifest, "\ngbm_accepted="));
  CHECK(contains(manifest, "\ndejd_accepted="));

  SmileArgs smile;
  smile.input_path = feed;
  smile.out_dir = dir_a;
  REQUIRE(cmd_smile(smile, log) == 0);
  smile.out_dir = dir_b;
  REQUIRE(cmd_smile(smile, log) == 0);
  CHECK(read_file(dir_a, "smile.csv") == read_file(dir_b, "smile.csv"));
  CHECK(read_file(dir_a, "smile.csv").rfind("moneyness,sigma_implied,side,ts\n",
                                            0) == 0);
}

TEST_CASE("summary merges models by day and appends a mean row") {
  const std::string dir = testutil::scratch_dir("report_summary");
  write_text_file(
      (std::filesystem::path(dir) / "day1_results_gbm.csv").string(),
      results_to_csv(tiny_fit(Model::gbm, 1.5, 2.0, 4.0, 6.0)));
  write_text_file(
      (std::filesystem::path(dir) / "day1_results_dejd.csv").string(),
      results_to_csv(tiny_fit(Model::dejd, 1.0, 2.0, 2.0, 8.0)));

  const std::string header =
      "date,gbm_bid_r_mean,gbm_bid_r_std,gbm_bid_u_mean,gbm_bid_u_std,"
      "gbm_ask_r_mean,gbm_ask_r_std,gbm_ask_u_mean,gbm_ask_u_std,"
      "dejd_bid_r_mean,dejd_bid_r_std,dejd_bid_u_mean,dejd_bid_u_std,"
      "dejd_ask_r_mean,dejd_ask_r_std,dejd_ask_u_mean,dejd_ask_u_std\n";

  SUBCASE("both models land in one row keyed by the stripped stem") {
    SummaryArgs args;
    args.results_paths = {
        (std::filesystem::path(dir) / "day1_results_gbm.csv").string(),
        (std::filesystem::path(dir) / "day1_results_dejd.csv").string()};
    args.out_dir = dir;
    std::ostringstream log;
    REQUIRE(cmd_summary(args, log) == 0);

    const std::string row = "day1,1.5,0,4,0,2,0,6,0,1,0,2,0,2,0,8,0\n";
    CHECK(read_file(dir, "summary.csv") == header + row +
                                               "Mean,1.5,0,4,0,2,0,6,0,1,0,2,"
                                               "0,2,0,8,0\n");
    const std::string manifest = read_file(dir, "manifest_summary.txt");
    CHECK(manifest.rfind("command=summary\n", 0) == 0);
    CHECK(contains(manifest, "\nn_rows=1\n"));
  }

  SUBCASE("a missing model leaves its cells empty, also in the mean row") {
    SummaryRow row;
    row.date = "day1";
    row.has_gbm = true;
    row.gbm_bid = DailySummary{2, 1.5, 0.0, 4.0, 0.0};
    row.gbm_ask = DailySummary{2, 2.0, 0.0, 6.0, 0.0};
    CHECK(summary_to_csv({row}, true) ==
          header + "day1,1.5,0,4,0,2,0,6,0,,,,,,,,\n"
                   "Mean,1.5,0,4,0,2,0,6,0,,,,,,,,\n");
  }

  SUBCASE("no rows means header only, even when a mean row is requested") {
    CHECK(summary_to_csv({}, true) == header);
  }
}

TEST_CASE("results csv round-trips through the parser") {
  FitResult fit = tiny_fit(Model::dejd, 1.25, 1.75, 3.0, 5.0);
  fit.bid.valid[1] = 0;  // one-sided point: bid cells empty, row flagged 0

  const std::string csv = results_to_csv(fit);
  CHECK(contains(csv, ",0\n"));  // the invalid row's flag
  const FitResult back = parse_results_csv(csv);

  CHECK(back.model == Model::dejd);
  REQUIRE(back.ts_ms == fit.ts_ms);
  CHECK(back.bid.valid == std::vector<std::uint8_t>{1, 0});
  CHECK(back.ask.valid == std::vector<std::uint8_t>{1, 1});
  CHECK(back.bid.r[0] == fit.bid.r[0]);
  CHECK(std::isnan(back.bid.r[1]));
  CHECK(back.ask.u[1] == fit.ask.u[1]);
  CHECK(back.sigma == fit.sigma);
  CHECK(back.lambda == fit.lambda);
  CHECK(back.eta2 == fit.eta2);

  const FitResult gbm_back =
      parse_results_csv(results_to_csv(tiny_fit(Model::gbm, 1.0, 1.0, 2.0, 2.0)));
  CHECK(gbm_back.model == Model::gbm);  // no jump cells -> diffusion model
  CHECK(std::isnan(gbm_back.lambda[0]));
  CHECK(gbm_back.sigma[0] == 0.25);

  CHECK_THROWS_AS(parse_results_csv("garbage\n1,2,3\n"), Error);
  CHECK_THROWS_AS(parse_results_csv("ts,r_bid\n1,2\n"), Error);
  CHECK_THROWS_AS(parse_results_csv(""), Error);
}

TEST_CASE("failures and degraded fits map to distinct exit codes") {
  const std::string dir = testutil::scratch_dir("report_exit");
  std::ostringstream log;

  SUBCASE("unreadable input") {
    IngestArgs args;
    args.input_path =
        (std::filesystem::path(dir) / "no_such_file.txt").string();
    args.out_dir = dir;
    CHECK(cmd_ingest(args, log) == 1);
    CHECK(contains(log.str(), "error:"));
  }

  SUBCASE("bad configuration") {
    SummaryArgs args;
    args.out_dir = dir;
    CHECK(cmd_summary(args, log) == 1);  // no results files

    const std::string bad =
        (std::filesystem::path(dir) / "bad_results.csv").string();
    write_text_file(bad, "not,a,results,file\n");
    args.results_paths = {bad};
    CHECK(cmd_summary(args, log) == 1);
  }

  SUBCASE("a day too short to fit exhausts the invalid budget") {
    SimulateArgs sim;
    sim.out_dir = dir;
    sim.path.horizon_s = 600.0;  // 21 grid points < one estimator window
    sim.path.s0 = 6000.0;
    REQUIRE(cmd_simulate(sim, log) == 0);

    FitArgs fit;
    fit.input_path = (std::filesystem::path(dir) / "sim_feed.txt").string();
    fit.out_dir = dir;
    CHECK(cmd_fit(fit, log) == 2);
    CHECK(contains(log.str(), "exceeds budget"));
  }

  SUBCASE("grid output mode writes one row per grid point") {
    SimulateArgs sim;
    sim.out_dir = dir;
    sim.out_name = "grid.csv";
    sim.raw_feed = false;
    sim.path.horizon_s = 600.0;
    REQUIRE(cmd_simulate(sim, log) == 0);
    const std::string grid = read_file(dir, "grid.csv");
    CHECK(grid.rfind("ts_ms,price\n", 0) == 0);
    CHECK(std::count(grid.begin(), grid.end(), '\n') == 22);  // header + 21
    CHECK(contains(read_file(dir, "manifest_simulate.txt"),
                   "\nformat=grid_csv\n"));
  }
}

TEST_CASE("output directory resolution prefers explicit, then environment") {
  const std::string dir = testutil::scratch_dir("report_outdir");
  ::setenv(kOutDirEnvVar, dir.c_str(), 1);
  CHECK(resolve_out_dir("explicit") == "explicit");
  CHECK(resolve_out_dir("") == dir);
  ::unsetenv(kOutDirEnvVar);
  CHECK(resolve_out_dir("") == ".");
}

}  // TEST_SUITE("report")
