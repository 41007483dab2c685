#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "earcp/factory.hpp"
#include "earcp/losses.hpp"
#include "earcp/simulator.hpp"

namespace earcp {

/// Externally produced expert stream (see CsvStreamReader for the format).
struct CsvInput {
  std::string path;
  TaskMode mode = TaskMode::kClassification;
  std::size_t m = 2;
  std::size_t d = 2;
  std::uint64_t delay = 0;
  std::vector<std::uint64_t> change_points;

  friend bool operator==(const CsvInput&, const CsvInput&) = default;
};

/// One ablation axis: an EARCP hyperparameter and the values it takes.
struct GridAxis {
  std::string parameter;  // beta, alpha_p, alpha_c, w_min or eta_s
  std::vector<double> values;

  friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

struct ExperimentConfig {
  std::vector<AggregatorSpec> aggregators;
  std::variant<ScenarioSpec, CsvInput> input;
  std::vector<std::uint64_t> seeds;
  LossKind loss = ScaledSquaredError{1.0};
  std::string output_dir = "results";
  std::vector<GridAxis> grid;

  std::size_t num_experts() const;
  TaskMode mode() const;
  const std::vector<std::uint64_t>& change_points() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses the experiment document. Layout:
///
///   seeds = [1, 2, 3]
///   loss = "zero_one"          # "sq" (loss_bound), "xent" (loss_clip)
///   output_dir = "results"
///
///   [aggregator.NAME]          # one section per aggregator
///   kind = "earcp"             # earcp, hedge, uniform, ftl
///   beta = 0.7                 # any EarcpConfig field; hedge: eta, horizon
///
///   [scenario]                 # or [csv] with path, mode, m, d
///   mode = "classification"
///   m = 4
///   d = 10
///   horizon = 2000
///   experts = ["accurate(0)", "random", "random", "random"]
///   change_points = [1000]
///   delay = 0
///
///   [grid]                     # optional ablation axes
///   beta = [0, 0.3, 0.5, 0.7, 0.9, 1]
///
/// Every problem found is reported at once in a ConfigParseError, each
/// message prefixed with "line N:" and the offending key.
ExperimentConfig parse_config(std::string_view text);

/// Inverse of parse_config: parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

/// A point of the ablation grid.
struct GridCell {
  std::vector<std::pair<std::string, double>> assignments;

  /// "beta=0.7;alpha_p=0.9", or "-" for the empty cell.
  std::string label() const;
  EarcpConfig apply(EarcpConfig base) const;
};

/// Cartesian product of the grid axes, first axis varying slowest. An empty
/// grid yields a single empty cell.
std::vector<GridCell> expand_grid(const std::vector<GridAxis>& grid);

}  // namespace earcp
