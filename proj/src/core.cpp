#include "earcp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "earcp/errors.hpp"

namespace earcp {

std::string_view to_string(TaskMode mode) {
  return mode == TaskMode::kClassification ? "classification" : "regression";
}

TaskMode task_mode_from_string(std::string_view name) {
  if (name == "classification") return TaskMode::kClassification;
  if (name == "regression") return TaskMode::kRegression;
  throw ConfigError(fmt::format("unknown task mode '{}'", name));
}

bool is_on_simplex(std::span<const double> values, double tolerance) {
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) return false;
    sum += v;
  }
  return !values.empty() && std::abs(sum - 1.0) <= tolerance;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (values[j] > values[best]) best = j;
  }
  return best;
}

namespace {

void require_open_unit(std::string_view name, double v) {
  if (!(v > 0.0 && v < 1.0)) {
    throw ConfigError(fmt::format("{} must be in (0, 1), got {}", name, v));
  }
}

void require_positive(std::string_view name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{} must be > 0, got {}", name, v));
  }
}

}  // namespace

void EarcpConfig::validate() const {
  require_open_unit("alpha_p", alpha_p);
  require_open_unit("alpha_c", alpha_c);
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ConfigError(fmt::format("beta must be in [0, 1], got {}", beta));
  }
  require_positive("eta_s", eta_s);
  if (!(w_min >= 0.0 && w_min < 1.0)) {
    throw ConfigError(fmt::format("w_min must be in [0, 1/M), got {}", w_min));
  }
  require_positive("s_max", s_max);
  require_positive("gamma", gamma);
  require_positive("epsilon", epsilon);
  if (norm_window && *norm_window == 0) {
    throw ConfigError("norm_window must be a positive integer or unbounded");
  }
  if (coherence_sample_k && *coherence_sample_k == 0) {
    throw ConfigError("coherence_sample_k must be a positive integer");
  }
  require_positive("hedge_eta", hedge_eta);
  if (max_pending == 0) throw ConfigError("max_pending must be positive");
}

void EarcpConfig::validate_for(std::size_t num_experts) const {
  validate();
  if (num_experts < 2) {
    throw ConfigError(fmt::format("need at least 2 experts, got {}", num_experts));
  }
  if (w_min * static_cast<double>(num_experts) >= 1.0) {
    throw ConfigError(fmt::format("w_min must be in [0, 1/M) = [0, {}), got {}",
                                  1.0 / static_cast<double>(num_experts), w_min));
  }
  if (coherence_sample_k && *coherence_sample_k > num_experts - 1) {
    throw ConfigError(fmt::format("coherence_sample_k must be in [1, M-1] = [1, {}], got {}",
                                  num_experts - 1, *coherence_sample_k));
  }
}

AggregatorState AggregatorState::initial(std::size_t m) {
  AggregatorState s;
  s.m = m;
  s.weights.assign(m, 1.0 / static_cast<double>(m));
  s.perf.assign(m, 0.0);
  s.coh.assign(m, 0.5);
  s.cum_loss.assign(m, 0.0);
  return s;
}

PredictionVector combine_predictions(std::span<const double> weights,
                                     std::span<const PredictionVector> predictions,
                                     TaskMode mode, bool* renormalized) {
  if (renormalized) *renormalized = false;
  if (predictions.empty() || weights.size() != predictions.size()) {
    throw StructuralError(fmt::format("combine: {} weights for {} predictions", weights.size(),
                                      predictions.size()));
  }
  const std::size_t d = predictions.front().size();
  for (const auto& p : predictions) {
    if (p.size() != d || d == 0) {
      throw StructuralError(fmt::format("combine: prediction of length {} where {} expected",
                                        p.size(), d));
    }
  }
  if (!is_on_simplex(weights)) throw ContractError("combine: weights are not on the simplex");

  std::vector<double> out(d, 0.0);
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double w = weights[i];
    const auto p = predictions[i].values();
    for (std::size_t j = 0; j < d; ++j) out[j] += w * p[j];
  }
  if (mode == TaskMode::kClassification) {
    const double sum = std::accumulate(out.begin(), out.end(), 0.0);
    if (std::abs(sum - 1.0) > kSimplexTolerance && sum > 0.0) {
      for (double& v : out) v /= sum;
      if (renormalized) *renormalized = true;
    }
  }
  return PredictionVector(std::move(out));
}

double weight_entropy(std::span<const double> weights) {
  double h = 0.0;
  for (double w : weights) {
    if (w > 0.0) h -= w * std::log(w);
  }
  const double upper = weights.empty() ? 0.0 : std::log(static_cast<double>(weights.size()));
  return std::clamp(h, 0.0, upper);
}

}  // namespace earcp
