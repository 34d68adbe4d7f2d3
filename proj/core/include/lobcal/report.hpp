#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "lobcal/fitting.hpp"
#include "lobcal/lob.hpp"
#include "lobcal/simulator.hpp"

namespace lobcal {

// -----------------------------------------------------------------------------
// Command layer
// -----------------------------------------------------------------------------
//
// The CLI subcommands are implemented here as plain functions over argument
// structs so tests can drive them in-process. Each command writes its CSV
// outputs plus a manifest.txt (key=value run record) into the output
// directory and returns a process exit code:
//
//   0  success
//   1  input error (parse/io/config/domain)
//   2  numerical failure (solver) or invalid fraction beyond budget
//
// The output directory resolves as: explicit argument > $LOBCAL_OUT_DIR >
// current directory.
// -----------------------------------------------------------------------------

inline constexpr const char* kOutDirEnvVar = "LOBCAL_OUT_DIR";
inline constexpr const char* kVersion = "1.0.0";

std::string resolve_out_dir(const std::string& requested);

struct IngestArgs {
  std::string input_path;
  std::string out_dir;  // empty = resolve via environment / cwd
  BookConfig book;
  std::string snapshots_csv = "snapshots.csv";
  std::string executions_csv = "executions.csv";
};
int cmd_ingest(const IngestArgs& args, std::ostream& log);

enum class FitModel { gbm, dejd, both };

struct FitArgs {
  std::string input_path;  // raw feed text
  std::string out_dir;
  BookConfig book;
  FitConfig fit;
  FitModel model = FitModel::both;
  std::string date;  // label for the summary row; default: input file stem
};
int cmd_fit(const FitArgs& args, std::ostream& log);

struct SmileArgs {
  std::string input_path;
  std::string out_dir;
  BookConfig book;
  FitConfig fit;
  double r = 0.5;
  double c = 0.2355;
  std::string smile_csv = "smile.csv";
};
int cmd_smile(const SmileArgs& args, std::ostream& log);

struct SimulateArgs {
  std::string out_dir;
  std::string out_name = "sim_feed.txt";
  PathSpec path;
  SynthBookSpec book;
  bool raw_feed = true;  // false: grid CSV ts_ms,price instead of a feed
};
int cmd_simulate(const SimulateArgs& args, std::ostream& log);

struct SummaryArgs {
  std::vector<std::string> results_paths;  // results CSVs from cmd_fit
  std::vector<std::string> dates;          // optional labels, aligned by index
  std::string out_dir;
  std::string out_name = "summary.csv";
};
int cmd_summary(const SummaryArgs& args, std::ostream& log);

// -----------------------------------------------------------------------------
// CSV codecs shared by commands and tests
// -----------------------------------------------------------------------------

std::string snapshots_to_csv(const std::vector<LobSnapshot>& snapshots,
                             const BookConfig& cfg);
std::string executions_to_csv(const std::vector<Execution>& executions,
                              double tick);
std::string estimators_to_csv(const RollingStats& stats);
std::string results_to_csv(const FitResult& fit);
std::string smile_to_csv(const SmileResult& smile);
std::string diagnostics_to_csv(const Diagnostics& diag);

// One summary row in the wide descriptive-statistics layout; cells of a model
// that was not fitted stay empty.
struct SummaryRow {
  std::string date;
  bool has_gbm = false, has_dejd = false;
  DailySummary gbm_bid, gbm_ask, dejd_bid, dejd_ask;
};
std::string summary_to_csv(const std::vector<SummaryRow>& rows, bool mean_row);

// Parses a results.csv produced by results_to_csv (used by cmd_summary).
FitResult parse_results_csv(const std::string& text);

}  // namespace lobcal
