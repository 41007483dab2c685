#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "earcp/config.hpp"
#include "earcp/earcp.hpp"
#include "earcp/metrics.hpp"

namespace earcp {

struct RunOptions {
  bool expand_grid = false;   // sweep: one run per grid cell
  std::size_t threads = 0;    // 0 = hardware concurrency
  std::ostream* log = nullptr;
};

struct RunSummaryRow {
  std::string aggregator;
  std::string kind;
  std::string cell;  // grid cell label, "-" when not swept
  std::uint64_t seed = 0;
  RunMetrics metrics;
  std::vector<double> segment_regrets;
  std::string trace_file;  // relative to the output directory
};

struct ExperimentResult {
  std::vector<RunSummaryRow> rows;
  std::vector<std::filesystem::path> files;
};

/// Runs every (aggregator x grid cell x seed) combination, writing one trace
/// CSV per run under <output_dir>/traces/, a row per run to summary.csv, and
/// (with two or more seeds) mean/std/bootstrap CI per aggregator and cell to
/// summary_stats.csv. Baselines ignore the grid. Runs are independent and
/// may execute in parallel; outputs depend only on the configuration. On
/// failure every file written so far is removed and the error rethrown.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Writes the scenario stream of each seed to <output_dir>/streams/seed<S>.csv
/// in the ingestion format.
std::vector<std::filesystem::path> simulate_streams(const ExperimentConfig& config);

/// Continues a restored session over a stream file, skipping the steps it has
/// already consumed.
Trace replay_stream(EarcpAggregator& session, std::istream& csv);

}  // namespace earcp
