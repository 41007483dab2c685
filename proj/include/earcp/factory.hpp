#pragma once

#include <memory>
#include <string>
#include <variant>

#include "earcp/aggregator.hpp"
#include "earcp/baselines.hpp"
#include "earcp/core.hpp"
#include "earcp/losses.hpp"

namespace earcp {

/// A named aggregator recipe: EARCP hyperparameters or a baseline.
struct AggregatorSpec {
  std::string name;
  std::variant<EarcpConfig, BaselineKind> kind;

  friend bool operator==(const AggregatorSpec&, const AggregatorSpec&) = default;
};

/// "earcp", "hedge", "uniform" or "ftl".
std::string kind_key(const AggregatorSpec& spec);

std::unique_ptr<Aggregator> make_aggregator(const AggregatorSpec& spec, std::size_t m,
                                            TaskMode mode, const LossKind& loss);

}  // namespace earcp
