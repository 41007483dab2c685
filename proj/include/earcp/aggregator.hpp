#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "earcp/core.hpp"
#include "earcp/losses.hpp"

namespace earcp {

/// A prediction round that is still waiting for its target.
struct PendingFeedback {
  std::uint64_t step = 0;
  std::vector<PredictionVector> predictions;
  std::optional<std::vector<std::size_t>> predicted_classes;
  PredictionVector ensemble;

  friend bool operator==(const PendingFeedback&, const PendingFeedback&) = default;
};

inline constexpr std::size_t kDefaultMaxPending = 1024;

/// Common predict/update protocol shared by EARCP and the baselines.
///
/// predict() combines the current weights with the experts' predictions and
/// files the round under the next step number (1, 2, ...). update(step, y)
/// settles that round whenever its target arrives; rounds may be settled
/// late and out of order. A session is single-writer.
class Aggregator {
 public:
  virtual ~Aggregator() = default;

  Aggregator(const Aggregator&) = default;
  Aggregator& operator=(const Aggregator&) = default;
  Aggregator(Aggregator&&) = default;
  Aggregator& operator=(Aggregator&&) = default;

  virtual std::string_view name() const = 0;

  PredictionVector predict(std::span<const PredictionVector> predictions);
  StepOutcome update(std::uint64_t step, const PredictionVector& target);

  std::size_t num_experts() const { return m_; }
  TaskMode mode() const { return mode_; }
  const LossKind& loss() const { return loss_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> cumulative_losses() const { return cum_loss_; }
  double cumulative_ensemble_loss() const { return cum_ensemble_loss_; }

  // Number of completed updates.
  std::uint64_t updates() const { return t_; }
  // Step number the next predict() call will be filed under.
  std::uint64_t next_step() const { return next_step_; }
  std::size_t pending_count() const { return pending_.size(); }
  // Prediction dimension, fixed by the first predict() call.
  std::optional<std::size_t> dimension() const { return dimension_; }
  const std::map<std::uint64_t, PendingFeedback>& pending() const { return pending_; }

  // Times a classification ensemble output had to be renormalized.
  std::size_t ensemble_renormalizations() const { return renormalizations_; }

 protected:
  Aggregator(std::size_t m, TaskMode mode, LossKind loss, std::size_t max_pending);

  /// Computes new weights into weights_ and the per-expert scores into
  /// outcome.scores. Called after cum_loss_ already includes `losses`.
  virtual void reweight(const PendingFeedback& entry, std::span<const double> losses,
                        StepOutcome& outcome) = 0;

  void restore_common(std::uint64_t t, std::vector<double> weights, std::vector<double> cum_loss,
                      double cum_ensemble_loss, std::uint64_t next_step,
                      std::optional<std::size_t> dimension,
                      std::map<std::uint64_t, PendingFeedback> pending);

  std::vector<double> weights_;

 private:
  void check_predictions(std::span<const PredictionVector> predictions);

  std::size_t m_;
  TaskMode mode_;
  LossKind loss_;
  std::size_t max_pending_;
  std::optional<std::size_t> dimension_;
  std::uint64_t t_ = 0;
  std::uint64_t next_step_ = 1;
  std::vector<double> cum_loss_;
  double cum_ensemble_loss_ = 0.0;
  std::map<std::uint64_t, PendingFeedback> pending_;
  std::size_t renormalizations_ = 0;
};

}  // namespace earcp
