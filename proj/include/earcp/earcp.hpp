#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "earcp/aggregator.hpp"
#include "earcp/core.hpp"
#include "earcp/losses.hpp"

namespace earcp {

// Building blocks of the weight update, exposed for testing.

/// (x_i - lo) / (hi - lo + epsilon), where lo/hi are the extremes over every
/// expert in every snapshot of `window`. The window is expected to contain
/// `current` as its newest snapshot.
std::vector<double> normalize_rolling(std::span<const double> current,
                                      const std::deque<std::vector<double>>& window,
                                      double epsilon);

/// beta * perf + (1 - beta) * coh, clipped to [-s_max, s_max].
std::vector<double> blend_scores(std::span<const double> perf, std::span<const double> coh,
                                 double beta, double s_max);

/// exp(eta * s_i) / sum_j exp(eta * s_j), evaluated with a max shift.
std::vector<double> exponential_weights(std::span<const double> scores, double eta);

/// w_i <- max(w_i, w_min), then renormalize to sum 1.
void apply_weight_floor(std::vector<double>& weights, double w_min);

/// Online ensemble weighting from smoothed performance and inter-expert
/// coherence.
///
/// Each update evaluates every expert's loss, folds -loss into an EMA of
/// performance and the step's coherence into an EMA of agreement, min-max
/// normalizes both against a rolling window, blends them with beta,
/// clips, exponentiates with eta_s, normalizes, and finally enforces the
/// w_min floor followed by one renormalization. Because the floor is applied
/// before renormalizing, a floored weight can end slightly below w_min; the
/// guaranteed lower bound is w_min / (1 + M w_min).
///
/// With hedge_compat the update instead sets w_i proportional to
/// exp(-hedge_eta * cumulative loss_i), i.e. classical Hedge.
class EarcpAggregator final : public Aggregator {
 public:
  EarcpAggregator(EarcpConfig config, std::size_t m, TaskMode mode, LossKind loss);

  /// Rebuilds a session from saved state.
  EarcpAggregator(EarcpConfig config, TaskMode mode, LossKind loss, AggregatorState state,
                  std::uint64_t next_step, std::optional<std::size_t> dimension,
                  std::map<std::uint64_t, PendingFeedback> pending);

  std::string_view name() const override { return "earcp"; }

  const EarcpConfig& config() const { return config_; }
  AggregatorState state() const;

  /// update() restricted to hedge_compat sessions; throws ModeError otherwise.
  StepOutcome update_hedge_compat(std::uint64_t step, const PredictionVector& target);

 protected:
  void reweight(const PendingFeedback& entry, std::span<const double> losses,
                StepOutcome& outcome) override;

 private:
  void hedge_reweight(StepOutcome& outcome);
  std::vector<double> raw_coherence(const PendingFeedback& entry) const;
  void push_snapshot(std::deque<std::vector<double>>& history, const std::vector<double>& values);

  EarcpConfig config_;
  std::vector<double> perf_;
  std::vector<double> coh_;
  std::deque<std::vector<double>> perf_history_;
  std::deque<std::vector<double>> coh_history_;
};

}  // namespace earcp
