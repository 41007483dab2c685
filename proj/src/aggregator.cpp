#include "earcp/aggregator.hpp"

#include <cmath>

#include <fmt/format.h>

#include "earcp/errors.hpp"

namespace earcp {

Aggregator::Aggregator(std::size_t m, TaskMode mode, LossKind loss, std::size_t max_pending)
    : m_(m), mode_(mode), loss_(loss), max_pending_(max_pending) {
  if (m < 2) throw ConfigError(fmt::format("need at least 2 experts, got {}", m));
  if (max_pending == 0) throw ConfigError("max_pending must be positive");
  validate(loss_);
  weights_.assign(m, 1.0 / static_cast<double>(m));
  cum_loss_.assign(m, 0.0);
}

void Aggregator::check_predictions(std::span<const PredictionVector> predictions) {
  if (predictions.size() != m_) {
    throw StructuralError(
        fmt::format("session has {} experts but received {} predictions", m_, predictions.size()));
  }
  const std::size_t d = dimension_.value_or(predictions.front().size());
  if (d == 0) throw StructuralError("predictions must have at least one component");
  for (std::size_t i = 0; i < m_; ++i) {
    const auto& p = predictions[i];
    if (p.size() != d) {
      throw StructuralError(
          fmt::format("expert {} predicted {} components, expected {}", i, p.size(), d));
    }
    for (double v : p) {
      if (!std::isfinite(v)) throw ContractError(fmt::format("expert {}: non-finite prediction", i));
    }
    if (mode_ == TaskMode::kClassification && !is_on_simplex(p.values())) {
      throw ContractError(fmt::format("expert {}: prediction is not a probability vector", i));
    }
  }
  dimension_ = d;
}

PredictionVector Aggregator::predict(std::span<const PredictionVector> predictions) {
  check_predictions(predictions);
  if (pending_.size() >= max_pending_) {
    throw FeedbackError(
        fmt::format("{} predictions already await feedback (limit {})", pending_.size(), max_pending_));
  }
  bool renormalized = false;
  PendingFeedback entry;
  entry.step = next_step_;
  entry.predictions.assign(predictions.begin(), predictions.end());
  entry.ensemble = combine_predictions(weights_, predictions, mode_, &renormalized);
  if (renormalized) ++renormalizations_;
  if (mode_ == TaskMode::kClassification) {
    std::vector<std::size_t> classes(m_);
    for (std::size_t i = 0; i < m_; ++i) classes[i] = argmax(predictions[i].values());
    entry.predicted_classes = std::move(classes);
  }
  PredictionVector ensemble = entry.ensemble;
  pending_.emplace(next_step_, std::move(entry));
  ++next_step_;
  return ensemble;
}

StepOutcome Aggregator::update(std::uint64_t step, const PredictionVector& target) {
  auto it = pending_.find(step);
  if (it == pending_.end()) {
    throw FeedbackError(fmt::format("no pending prediction for step {}", step));
  }
  const PendingFeedback& entry = it->second;
  if (target.size() != entry.ensemble.size()) {
    throw StructuralError(fmt::format("target has {} components, predictions have {}",
                                      target.size(), entry.ensemble.size()));
  }
  for (double v : target) {
    if (!std::isfinite(v)) throw ContractError("non-finite target");
  }

  StepOutcome outcome;
  outcome.step = step;
  outcome.per_expert_losses.resize(m_);
  for (std::size_t i = 0; i < m_; ++i) {
    outcome.per_expert_losses[i] = evaluate_loss(loss_, entry.predictions[i], target);
  }
  outcome.ensemble_prediction = entry.ensemble;
  outcome.ensemble_loss = evaluate_loss(loss_, entry.ensemble, target);
  outcome.predicted_classes = entry.predicted_classes;

  for (std::size_t i = 0; i < m_; ++i) cum_loss_[i] += outcome.per_expert_losses[i];
  reweight(entry, outcome.per_expert_losses, outcome);
  cum_ensemble_loss_ += outcome.ensemble_loss;
  ++t_;

  outcome.new_weights = weights_;
  outcome.entropy = weight_entropy(weights_);
  pending_.erase(it);
  return outcome;
}

void Aggregator::restore_common(std::uint64_t t, std::vector<double> weights,
                                std::vector<double> cum_loss, double cum_ensemble_loss,
                                std::uint64_t next_step,
                                std::optional<std::size_t> dimension,
                                std::map<std::uint64_t, PendingFeedback> pending) {
  if (weights.size() != m_ || cum_loss.size() != m_) {
    throw StructuralError("restored state does not match the expert count");
  }
  if (!is_on_simplex(weights, 1e-12)) throw ContractError("restored weights are not on the simplex");
  t_ = t;
  weights_ = std::move(weights);
  cum_loss_ = std::move(cum_loss);
  cum_ensemble_loss_ = cum_ensemble_loss;
  next_step_ = next_step;
  dimension_ = dimension;
  pending_ = std::move(pending);
  for (const auto& [step, entry] : pending_) {
    if (entry.predictions.size() != m_ || !dimension_ || entry.ensemble.size() != *dimension_) {
      throw StructuralError(fmt::format("restored pending entry for step {} has the wrong shape", step));
    }
  }
}

}  // namespace earcp
