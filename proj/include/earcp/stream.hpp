#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "earcp/aggregator.hpp"
#include "earcp/core.hpp"
#include "earcp/metrics.hpp"

namespace earcp {

/// Expert predictions and the target for one step of a stream.
struct StreamStep {
  std::uint64_t step = 0;
  std::vector<PredictionVector> predictions;
  PredictionVector target;

  friend bool operator==(const StreamStep&, const StreamStep&) = default;
};

using StreamSource = std::function<std::optional<StreamStep>()>;

/// Feeds a stream through an aggregator. Each step is predicted as it
/// arrives; its target is delivered `delay` steps later (all outstanding
/// targets are delivered in order once the stream ends). Records carry the
/// stream's own step numbers and appear in delivery order.
Trace run_stream(Aggregator& aggregator, const StreamSource& source, std::uint64_t delay = 0);

}  // namespace earcp
