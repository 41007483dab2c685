#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "earcp/core.hpp"

namespace earcp {

struct CoherenceReport {
  std::vector<double> raw;  // one value in [0, 1] per expert
  std::size_t pairs_evaluated = 0;
};

/// Fraction of the other experts whose predicted class matches expert i's.
CoherenceReport classification_coherence(std::span<const std::size_t> predicted_classes);

/// Mean RBF similarity exp(-gamma ||p_i - p_j||^2) over the other experts,
/// Euclidean norm.
CoherenceReport regression_coherence(std::span<const PredictionVector> predictions, double gamma);

/// Sampled variants: each expert averages over k peers drawn without
/// replacement from the stream keyed by (seed, step, expert). Cost O(M k).
CoherenceReport sampled_coherence(std::span<const std::size_t> predicted_classes, std::size_t k,
                                  std::uint64_t seed, std::uint64_t step);
CoherenceReport sampled_coherence(std::span<const PredictionVector> predictions, double gamma,
                                  std::size_t k, std::uint64_t seed, std::uint64_t step);

/// Elementwise alpha_c * prev + (1 - alpha_c) * raw.
std::vector<double> smooth_coherence(std::span<const double> prev, std::span<const double> raw,
                                     double alpha_c);

}  // namespace earcp
