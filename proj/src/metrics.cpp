#include "earcp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "earcp/errors.hpp"
#include "earcp/rng.hpp"

namespace earcp {

ExperimentRecord to_record(std::uint64_t step, const StepOutcome& outcome) {
  ExperimentRecord r;
  r.step = step;
  r.ensemble_loss = outcome.ensemble_loss;
  r.per_expert_loss = outcome.per_expert_losses;
  r.weights = outcome.new_weights;
  r.entropy = outcome.entropy;
  r.scores = outcome.scores;
  return r;
}

namespace {

double range_regret(std::span<const ExperimentRecord> records) {
  if (records.empty()) return 0.0;
  const std::size_t m = records.front().per_expert_loss.size();
  double ensemble = 0.0;
  std::vector<double> experts(m, 0.0);
  for (const auto& r : records) {
    if (r.per_expert_loss.size() != m) throw StructuralError("regret: inconsistent expert count");
    ensemble += r.ensemble_loss;
    for (std::size_t i = 0; i < m; ++i) experts[i] += r.per_expert_loss[i];
  }
  return ensemble - *std::min_element(experts.begin(), experts.end());
}

}  // namespace

double regret(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw ContractError("regret of an empty trace");
  return range_regret(records);
}

std::vector<double> segment_regret(std::span<const ExperimentRecord> records,
                                   std::span<const std::uint64_t> change_points) {
  if (records.empty()) throw ContractError("segment_regret of an empty trace");
  const std::uint64_t last = records.back().step;
  for (std::size_t c = 0; c < change_points.size(); ++c) {
    if (change_points[c] < 1 || change_points[c] > last ||
        (c > 0 && change_points[c] <= change_points[c - 1])) {
      throw ContractError(fmt::format(
          "change points must be strictly increasing within [1, {}]; offending value {}", last,
          change_points[c]));
    }
  }
  std::vector<double> out;
  out.reserve(change_points.size() + 1);
  auto begin = records.begin();
  for (std::uint64_t cp : change_points) {
    auto end = std::find_if(begin, records.end(), [cp](const auto& r) { return r.step >= cp; });
    out.push_back(range_regret({begin, end}));
    begin = end;
  }
  out.push_back(range_regret({begin, records.end()}));
  return out;
}

namespace {

// Linear interpolation between closest ranks.
double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

MetricSummary summarize_metric(std::string metric, std::span<const double> values,
                               std::uint64_t seed) {
  if (values.size() < 2) {
    throw ContractError(fmt::format("summary of '{}' needs at least 2 runs, got {}", metric,
                                    values.size()));
  }
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());

  MetricSummary s;
  s.metric = std::move(metric);
  s.runs = v.size();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std_dev = std::sqrt(ss / (n - 1.0));

  SplitMix64 rng(seed, 0x626f6f74, v.size());
  std::vector<double> means(kBootstrapResamples);
  for (double& mean : means) {
    double sum = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) sum += v[rng.bounded(v.size())];
    mean = sum / n;
  }
  std::sort(means.begin(), means.end());
  s.ci_low = percentile(means, 0.025);
  s.ci_high = percentile(means, 0.975);
  return s;
}

RunMetrics run_metrics(std::span<const ExperimentRecord> records) {
  RunMetrics m;
  m.final_regret = regret(records);
  double entropy = 0.0;
  m.min_entropy = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    m.cumulative_loss += r.ensemble_loss;
    entropy += r.entropy;
    m.min_entropy = std::min(m.min_entropy, r.entropy);
  }
  m.mean_entropy = entropy / static_cast<double>(records.size());
  return m;
}

std::vector<MetricSummary> summarize(const std::vector<Trace>& runs, std::uint64_t seed) {
  std::vector<double> regrets, losses, mean_h, min_h;
  for (const auto& trace : runs) {
    const auto m = run_metrics(trace);
    regrets.push_back(m.final_regret);
    losses.push_back(m.cumulative_loss);
    mean_h.push_back(m.mean_entropy);
    min_h.push_back(m.min_entropy);
  }
  return {summarize_metric("final_regret", regrets, seed),
          summarize_metric("cumulative_loss", losses, seed),
          summarize_metric("mean_entropy", mean_h, seed),
          summarize_metric("min_entropy", min_h, seed)};
}

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

void write_trace_csv(std::ostream& out, std::span<const ExperimentRecord> records) {
  const std::size_t m = records.empty() ? 0 : records.front().weights.size();
  std::string line = "step,ensemble_loss,entropy";
  for (const char* prefix : {"w_", "l_", "s_"}) {
    for (std::size_t i = 0; i < m; ++i) line += fmt::format(",{}{}", prefix, i);
  }
  out << line << '\n';
  for (const auto& r : records) {
    line = fmt::format("{},{},{}", r.step, format_real(r.ensemble_loss), format_real(r.entropy));
    for (const auto* column : {&r.weights, &r.per_expert_loss, &r.scores}) {
      for (std::size_t i = 0; i < m; ++i) {
        line += ',';
        line += i < column->size() ? format_real((*column)[i]) : std::string("nan");
      }
    }
    out << line << '\n';
  }
}

}  // namespace earcp
