#include "earcp/factory.hpp"

#include "earcp/earcp.hpp"

namespace earcp {

std::string kind_key(const AggregatorSpec& spec) {
  if (std::holds_alternative<EarcpConfig>(spec.kind)) return "earcp";
  return std::string(baseline_key(std::get<BaselineKind>(spec.kind)));
}

std::unique_ptr<Aggregator> make_aggregator(const AggregatorSpec& spec, std::size_t m,
                                            TaskMode mode, const LossKind& loss) {
  if (const auto* config = std::get_if<EarcpConfig>(&spec.kind)) {
    return std::make_unique<EarcpAggregator>(*config, m, mode, loss);
  }
  return std::make_unique<BaselineAggregator>(std::get<BaselineKind>(spec.kind), m, mode, loss);
}

}  // namespace earcp
