#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "earcp/core.hpp"

namespace earcp {

// min(1, ||p - y||^2 / bound^2)
struct ScaledSquaredError {
  double bound = 1.0;
  friend bool operator==(const ScaledSquaredError&, const ScaledSquaredError&) = default;
};

// 1 if argmax(p) != argmax(y).
struct ZeroOneArgmax {
  friend bool operator==(const ZeroOneArgmax&, const ZeroOneArgmax&) = default;
};

// -ln(max(clip, p[argmax y])) / -ln(clip)
struct ClippedCrossEntropy {
  double clip = 0.01;
  friend bool operator==(const ClippedCrossEntropy&, const ClippedCrossEntropy&) = default;
};

/// Every alternative maps into [0, 1]; unbounded losses are not representable.
using LossKind = std::variant<ScaledSquaredError, ZeroOneArgmax, ClippedCrossEntropy>;

/// Throws ConfigError for a non-positive bound or a clip outside (0, 1).
void validate(const LossKind& kind);

/// Config key: "sq", "zero_one" or "xent".
std::string_view loss_key(const LossKind& kind);

/// Builds a loss from its config key. `parameter` is the bound for "sq" and
/// the clip for "xent"; it is ignored for "zero_one".
LossKind loss_from_key(std::string_view key, double parameter);

/// Whether the loss is convex in the prediction (holds for "sq" below
/// saturation and "xent" above the clip).
bool is_convex(const LossKind& kind);

double evaluate_loss(const LossKind& kind, const PredictionVector& prediction,
                     const PredictionVector& target);

}  // namespace earcp
