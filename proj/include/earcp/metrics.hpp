#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "earcp/core.hpp"

namespace earcp {

/// One row of a run trace, produced by each completed update.
struct ExperimentRecord {
  std::uint64_t step = 0;
  double ensemble_loss = 0.0;
  std::vector<double> per_expert_loss;
  std::vector<double> weights;
  double entropy = 0.0;
  std::vector<double> scores;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

using Trace = std::vector<ExperimentRecord>;

ExperimentRecord to_record(std::uint64_t step, const StepOutcome& outcome);

/// Cumulative ensemble loss minus the best expert's cumulative loss.
double regret(std::span<const ExperimentRecord> records);

/// Regret recomputed inside each segment against that segment's own best
/// expert. A change point c starts a new segment at step c, so k change
/// points yield k + 1 segments; an empty segment has regret 0.
std::vector<double> segment_regret(std::span<const ExperimentRecord> records,
                                   std::span<const std::uint64_t> change_points);

struct MetricSummary {
  std::string metric;
  std::size_t runs = 0;
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation
  double ci_low = 0.0;   // percentile bootstrap, 95%
  double ci_high = 0.0;

  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

inline constexpr std::size_t kBootstrapResamples = 1000;

/// Mean, sample std and percentile-bootstrap 95% CI of one metric over runs.
/// Values are sorted first, so the result does not depend on run order.
MetricSummary summarize_metric(std::string metric, std::span<const double> values,
                               std::uint64_t seed = 0);

/// Per-run scalars reported for every trace.
struct RunMetrics {
  double final_regret = 0.0;
  double cumulative_loss = 0.0;
  double mean_entropy = 0.0;
  double min_entropy = 0.0;
};

RunMetrics run_metrics(std::span<const ExperimentRecord> records);

/// Summaries of final_regret, cumulative_loss, mean_entropy and
/// min_entropy across at least two runs.
std::vector<MetricSummary> summarize(const std::vector<Trace>& runs, std::uint64_t seed = 0);

/// Renders a real with 17 significant digits.
std::string format_real(double value);

/// Trace CSV: step,ensemble_loss,entropy,w_0..,l_0..,s_0.. with LF endings.
void write_trace_csv(std::ostream& out, std::span<const ExperimentRecord> records);

}  // namespace earcp
