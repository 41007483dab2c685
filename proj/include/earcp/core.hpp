#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace earcp {

/// One expert's output (or a target) at one step: a class distribution in
/// classification mode, an unconstrained real vector in regression mode.
class PredictionVector {
 public:
  PredictionVector() = default;
  explicit PredictionVector(std::vector<double> values) : values_(std::move(values)) {}
  PredictionVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator[](std::size_t j) const { return values_[j]; }
  double& operator[](std::size_t j) { return values_[j]; }

  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const PredictionVector&, const PredictionVector&) = default;

 private:
  std::vector<double> values_;
};

enum class TaskMode { kClassification, kRegression };

std::string_view to_string(TaskMode mode);
TaskMode task_mode_from_string(std::string_view name);

// Tolerance for the probability-simplex invariant of predictions and weights.
inline constexpr double kSimplexTolerance = 1e-9;

bool is_on_simplex(std::span<const double> values, double tolerance = kSimplexTolerance);

/// Index of the largest entry, lowest index on ties. Used for both the
/// classification coherence and the 0-1 loss so they always agree.
std::size_t argmax(std::span<const double> values);

/// Hyperparameters of the coherence/performance weighting rule. Defaults are
/// the recommended operating point.
struct EarcpConfig {
  double alpha_p = 0.9;   // performance EMA smoothing, (0,1)
  double alpha_c = 0.85;  // coherence EMA smoothing, (0,1)
  double beta = 0.7;      // performance/coherence balance, [0,1]
  double eta_s = 5.0;     // softmax sensitivity, > 0
  double w_min = 0.05;    // weight floor, [0, 1/M)
  double s_max = 10.0;    // score clip bound, > 0
  double gamma = 1.0;     // regression coherence sensitivity, > 0
  double epsilon = 1e-8;  // min-max normalization guard, > 0

  // Number of past snapshots the min-max normalization looks at.
  // std::nullopt keeps every snapshot.
  std::optional<std::size_t> norm_window = 50;

  // Sampled peers per expert; std::nullopt means exact pairwise coherence.
  std::optional<std::size_t> coherence_sample_k;
  std::uint64_t coherence_seed = 0;

  bool hedge_compat = false;
  double hedge_eta = 0.5;

  // Maximum number of predictions awaiting feedback.
  std::size_t max_pending = 1024;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
  /// validate() plus the constraints that depend on the expert count.
  void validate_for(std::size_t num_experts) const;

  friend bool operator==(const EarcpConfig&, const EarcpConfig&) = default;
};

/// Full mutable state of one EARCP session.
struct AggregatorState {
  std::size_t m = 0;
  std::uint64_t t = 0;
  std::vector<double> weights;
  std::vector<double> perf;
  std::vector<double> coh;
  std::deque<std::vector<double>> perf_history;
  std::deque<std::vector<double>> coh_history;
  std::vector<double> cum_loss;
  double cum_ensemble_loss = 0.0;

  /// Uniform weights, zero performance, coherence 0.5.
  static AggregatorState initial(std::size_t m);

  friend bool operator==(const AggregatorState&, const AggregatorState&) = default;
};

struct StepOutcome {
  std::uint64_t step = 0;
  PredictionVector ensemble_prediction;
  double ensemble_loss = 0.0;
  std::vector<double> per_expert_losses;
  std::vector<double> new_weights;
  std::vector<double> scores;
  double entropy = 0.0;
  std::optional<std::vector<std::size_t>> predicted_classes;
};

/// Weighted sum of expert predictions. Weights must lie on the simplex.
/// In classification mode the output is renormalized if rounding pushed its
/// sum more than kSimplexTolerance away from 1; `renormalized` reports it.
PredictionVector combine_predictions(std::span<const double> weights,
                                     std::span<const PredictionVector> predictions,
                                     TaskMode mode = TaskMode::kRegression,
                                     bool* renormalized = nullptr);

/// Shannon entropy (natural log) of a weight vector, with 0 ln 0 = 0.
double weight_entropy(std::span<const double> weights);

}  // namespace earcp
