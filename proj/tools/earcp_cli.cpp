// earcp: command-line front end for experiments, stream simulation and
// snapshot replay.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "earcp/config.hpp"
#include "earcp/errors.hpp"
#include "earcp/experiment.hpp"
#include "earcp/snapshot.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw earcp::Error(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

earcp::ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed,
                                    const std::string& out) {
  auto config = earcp::parse_config(read_file(path));
  if (seed) config.seeds = {*seed};
  if (!out.empty()) config.output_dir = out;
  return config;
}

int run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out,
        bool quiet, bool sweep) {
  const auto config = load_config(path, seed, out);
  earcp::RunOptions options;
  options.expand_grid = sweep;
  options.log = quiet ? nullptr : &std::cerr;
  if (!sweep && !config.grid.empty() && !quiet) {
    std::cerr << "note: [grid] is ignored by 'run'; use 'sweep' to expand it\n";
  }
  const auto result = earcp::run_experiment(config, options);
  if (!quiet) {
    std::cout << fmt::format("{} runs written to {}\n", result.rows.size(), config.output_dir);
  }
  return 0;
}

int simulate(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out,
             bool quiet) {
  const auto files = earcp::simulate_streams(load_config(path, seed, out));
  if (!quiet) {
    for (const auto& f : files) std::cout << f.string() << '\n';
  }
  return 0;
}

int replay(const std::string& snapshot_path, const std::string& csv_path, const std::string& out,
           const std::string& save) {
  auto session = earcp::restore(read_file(snapshot_path));
  std::ifstream csv(csv_path);
  if (!csv) throw earcp::Error(fmt::format("cannot open '{}'", csv_path));
  const auto trace = earcp::replay_stream(session, csv);
  if (out.empty()) {
    earcp::write_trace_csv(std::cout, trace);
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw earcp::Error(fmt::format("cannot write '{}'", out));
    earcp::write_trace_csv(file, trace);
  }
  if (!save.empty()) {
    std::ofstream file(save, std::ios::binary);
    if (!file) throw earcp::Error(fmt::format("cannot write '{}'", save));
    file << earcp::snapshot(session);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherence- and performance-weighted expert ensembles"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "Experiment configuration file")->required();
    cmd->add_option("--seed", seed, "Run a single seed instead of the configured list");
    cmd->add_option("--out", out, "Output directory (overrides output_dir)");
    cmd->add_flag("--quiet", quiet, "Suppress progress output");
  };
  auto* run_cmd = app.add_subcommand("run", "Run the configured aggregators over every seed");
  add_common(run_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep", "Run with the [grid] ablation axes expanded");
  add_common(sweep_cmd);
  auto* sim_cmd = app.add_subcommand("simulate", "Write the scenario streams as CSV only");
  add_common(sim_cmd);

  std::string snapshot_path;
  std::string csv_path;
  std::string save;
  auto* replay_cmd = app.add_subcommand("replay", "Resume a saved EARCP session over a stream CSV");
  replay_cmd->add_option("snapshot", snapshot_path, "Snapshot JSON")->required();
  replay_cmd->add_option("csv", csv_path, "Stream CSV")->required();
  replay_cmd->add_option("--out", out, "Trace CSV destination (default: stdout)");
  replay_cmd->add_option("--save", save, "Write the final session snapshot here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run(config_path, seed, out, quiet, false);
    if (sweep_cmd->parsed()) return run(config_path, seed, out, quiet, true);
    if (sim_cmd->parsed()) return simulate(config_path, seed, out, quiet);
    return replay(snapshot_path, csv_path, out, save);
  } catch (const earcp::ConfigParseError& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& issue : e.issues()) std::cerr << "  " << issue << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
