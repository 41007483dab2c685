#include "earcp/coherence.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "earcp/errors.hpp"
#include "earcp/rng.hpp"

namespace earcp {

namespace {

void require_experts(std::size_t m) {
  if (m < 2) throw ConfigError(fmt::format("coherence needs at least 2 experts, got {}", m));
}

void require_finite(std::span<const PredictionVector> predictions) {
  const std::size_t d = predictions.front().size();
  for (const auto& p : predictions) {
    if (p.size() != d) throw StructuralError("coherence: predictions differ in length");
    for (double v : p) {
      if (!std::isfinite(v)) throw ContractError("coherence: non-finite prediction");
    }
  }
}

void require_sample_size(std::size_t m, std::size_t k) {
  if (k < 1 || k > m - 1) {
    throw ConfigError(fmt::format("sample size k must be in [1, {}], got {}", m - 1, k));
  }
}

double rbf(const PredictionVector& a, const PredictionVector& b, double gamma) {
  double sq = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    sq += diff * diff;
  }
  return std::exp(-gamma * sq);
}

template <typename Similarity>
CoherenceReport sampled(std::size_t m, std::size_t k, std::uint64_t seed, std::uint64_t step,
                        Similarity similarity) {
  CoherenceReport report;
  report.raw.resize(m);
  std::vector<std::size_t> peers;
  for (std::size_t i = 0; i < m; ++i) {
    SplitMix64 rng(seed, step, i);
    sample_peers(rng, m, i, k, peers);
    double sum = 0.0;
    for (std::size_t j : peers) sum += similarity(i, j);
    report.raw[i] = std::clamp(sum / static_cast<double>(k), 0.0, 1.0);
  }
  report.pairs_evaluated = m * k;
  return report;
}

}  // namespace

CoherenceReport classification_coherence(std::span<const std::size_t> predicted_classes) {
  const std::size_t m = predicted_classes.size();
  require_experts(m);
  std::vector<std::size_t> agree(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (predicted_classes[i] == predicted_classes[j]) {
        ++agree[i];
        ++agree[j];
      }
    }
  }
  CoherenceReport report;
  report.raw.resize(m);
  const double denom = static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) report.raw[i] = static_cast<double>(agree[i]) / denom;
  report.pairs_evaluated = m * (m - 1) / 2;
  return report;
}

CoherenceReport regression_coherence(std::span<const PredictionVector> predictions, double gamma) {
  const std::size_t m = predictions.size();
  require_experts(m);
  if (!(gamma > 0.0)) throw ConfigError(fmt::format("gamma must be > 0, got {}", gamma));
  require_finite(predictions);
  std::vector<double> sum(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double s = rbf(predictions[i], predictions[j], gamma);
      sum[i] += s;
      sum[j] += s;
    }
  }
  CoherenceReport report;
  report.raw.resize(m);
  const double denom = static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) report.raw[i] = std::clamp(sum[i] / denom, 0.0, 1.0);
  report.pairs_evaluated = m * (m - 1) / 2;
  return report;
}

CoherenceReport sampled_coherence(std::span<const std::size_t> predicted_classes, std::size_t k,
                                  std::uint64_t seed, std::uint64_t step) {
  const std::size_t m = predicted_classes.size();
  require_experts(m);
  require_sample_size(m, k);
  return sampled(m, k, seed, step, [&](std::size_t i, std::size_t j) {
    return predicted_classes[i] == predicted_classes[j] ? 1.0 : 0.0;
  });
}

CoherenceReport sampled_coherence(std::span<const PredictionVector> predictions, double gamma,
                                  std::size_t k, std::uint64_t seed, std::uint64_t step) {
  const std::size_t m = predictions.size();
  require_experts(m);
  require_sample_size(m, k);
  if (!(gamma > 0.0)) throw ConfigError(fmt::format("gamma must be > 0, got {}", gamma));
  require_finite(predictions);
  return sampled(m, k, seed, step, [&](std::size_t i, std::size_t j) {
    return rbf(predictions[i], predictions[j], gamma);
  });
}

std::vector<double> smooth_coherence(std::span<const double> prev, std::span<const double> raw,
                                     double alpha_c) {
  if (prev.size() != raw.size()) {
    throw StructuralError(fmt::format("smooth_coherence: {} vs {} entries", prev.size(), raw.size()));
  }
  std::vector<double> out(prev.size());
  for (std::size_t i = 0; i < prev.size(); ++i) {
    out[i] = std::clamp(alpha_c * prev[i] + (1.0 - alpha_c) * raw[i], 0.0, 1.0);
  }
  return out;
}

}  // namespace earcp
