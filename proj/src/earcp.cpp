#include "earcp/earcp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "earcp/coherence.hpp"
#include "earcp/errors.hpp"

namespace earcp {

std::vector<double> normalize_rolling(std::span<const double> current,
                                      const std::deque<std::vector<double>>& window,
                                      double epsilon) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  auto scan = [&](std::span<const double> values) {
    for (double v : values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  scan(current);
  for (const auto& snapshot : window) scan(snapshot);

  std::vector<double> out(current.size());
  const double range = hi - lo + epsilon;
  for (std::size_t i = 0; i < current.size(); ++i) out[i] = (current[i] - lo) / range;
  return out;
}

std::vector<double> blend_scores(std::span<const double> perf, std::span<const double> coh,
                                 double beta, double s_max) {
  std::vector<double> s(perf.size());
  for (std::size_t i = 0; i < perf.size(); ++i) {
    s[i] = std::clamp(beta * perf[i] + (1.0 - beta) * coh[i], -s_max, s_max);
  }
  return s;
}

std::vector<double> exponential_weights(std::span<const double> scores, double eta) {
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> w(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    w[i] = std::exp(eta * (scores[i] - top));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

void apply_weight_floor(std::vector<double>& weights, double w_min) {
  double sum = 0.0;
  for (double& w : weights) {
    w = std::max(w, w_min);
    sum += w;
  }
  for (double& w : weights) w /= sum;
}

EarcpAggregator::EarcpAggregator(EarcpConfig config, std::size_t m, TaskMode mode, LossKind loss)
    : Aggregator(m, mode, loss, config.max_pending), config_(config) {
  config_.validate_for(m);
  const auto init = AggregatorState::initial(m);
  perf_ = init.perf;
  coh_ = init.coh;
}

EarcpAggregator::EarcpAggregator(EarcpConfig config, TaskMode mode, LossKind loss,
                                 AggregatorState state, std::uint64_t next_step,
                                 std::optional<std::size_t> dimension,
                                 std::map<std::uint64_t, PendingFeedback> pending)
    : Aggregator(state.m, mode, loss, config.max_pending), config_(config) {
  config_.validate_for(state.m);
  const std::size_t m = state.m;
  if (state.perf.size() != m || state.coh.size() != m) {
    throw StructuralError("restored performance/coherence vectors do not match the expert count");
  }
  auto check_history = [&](const std::deque<std::vector<double>>& h) {
    if (config_.norm_window && h.size() > *config_.norm_window) {
      throw StructuralError("restored history is longer than norm_window");
    }
    for (const auto& snap : h) {
      if (snap.size() != m) throw StructuralError("restored history snapshot has the wrong size");
    }
  };
  check_history(state.perf_history);
  check_history(state.coh_history);
  perf_ = std::move(state.perf);
  coh_ = std::move(state.coh);
  perf_history_ = std::move(state.perf_history);
  coh_history_ = std::move(state.coh_history);
  restore_common(state.t, std::move(state.weights), std::move(state.cum_loss),
                 state.cum_ensemble_loss, next_step, dimension, std::move(pending));
}

AggregatorState EarcpAggregator::state() const {
  AggregatorState s;
  s.m = num_experts();
  s.t = updates();
  s.weights = weights_;
  s.perf = perf_;
  s.coh = coh_;
  s.perf_history = perf_history_;
  s.coh_history = coh_history_;
  const auto cum = cumulative_losses();
  s.cum_loss.assign(cum.begin(), cum.end());
  s.cum_ensemble_loss = cumulative_ensemble_loss();
  return s;
}

StepOutcome EarcpAggregator::update_hedge_compat(std::uint64_t step, const PredictionVector& target) {
  if (!config_.hedge_compat) throw ModeError("update_hedge_compat requires hedge_compat = true");
  return update(step, target);
}

std::vector<double> EarcpAggregator::raw_coherence(const PendingFeedback& entry) const {
  const auto k = config_.coherence_sample_k;
  if (mode() == TaskMode::kClassification) {
    const auto& classes = *entry.predicted_classes;
    return k ? sampled_coherence(classes, *k, config_.coherence_seed, entry.step).raw
             : classification_coherence(classes).raw;
  }
  return k ? sampled_coherence(entry.predictions, config_.gamma, *k, config_.coherence_seed,
                               entry.step)
                 .raw
           : regression_coherence(entry.predictions, config_.gamma).raw;
}

void EarcpAggregator::push_snapshot(std::deque<std::vector<double>>& history,
                                    const std::vector<double>& values) {
  history.push_back(values);
  if (config_.norm_window) {
    while (history.size() > *config_.norm_window) history.pop_front();
  }
}

void EarcpAggregator::reweight(const PendingFeedback& entry, std::span<const double> losses,
                               StepOutcome& outcome) {
  if (config_.hedge_compat) {
    hedge_reweight(outcome);
    return;
  }
  const std::size_t m = num_experts();
  const double ap = config_.alpha_p;
  for (std::size_t i = 0; i < m; ++i) perf_[i] = ap * perf_[i] + (1.0 - ap) * (-losses[i]);

  coh_ = smooth_coherence(coh_, raw_coherence(entry), config_.alpha_c);

  push_snapshot(perf_history_, perf_);
  push_snapshot(coh_history_, coh_);
  const auto perf_n = normalize_rolling(perf_, perf_history_, config_.epsilon);
  const auto coh_n = normalize_rolling(coh_, coh_history_, config_.epsilon);

  outcome.scores = blend_scores(perf_n, coh_n, config_.beta, config_.s_max);
  weights_ = exponential_weights(outcome.scores, config_.eta_s);
  apply_weight_floor(weights_, config_.w_min);
}

void EarcpAggregator::hedge_reweight(StepOutcome& outcome) {
  const auto cum = cumulative_losses();
  const double eta = config_.hedge_eta;
  const double best = *std::min_element(cum.begin(), cum.end());
  outcome.scores.resize(cum.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < cum.size(); ++i) {
    outcome.scores[i] = -eta * cum[i];
    weights_[i] = std::exp(-eta * (cum[i] - best));
    sum += weights_[i];
  }
  for (double& w : weights_) w /= sum;
}

}  // namespace earcp
