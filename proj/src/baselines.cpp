#include "earcp/baselines.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "earcp/errors.hpp"

namespace earcp {

std::string_view baseline_key(const BaselineKind& kind) {
  switch (kind.index()) {
    case 0:
      return "hedge";
    case 1:
      return "uniform";
    default:
      return "ftl";
  }
}

double hedge_learning_rate(const Hedge& hedge, std::size_t m, std::uint64_t t) {
  if (hedge.eta) return *hedge.eta;
  const double log_m = std::log(static_cast<double>(m));
  const std::uint64_t n = hedge.horizon ? *hedge.horizon : std::max<std::uint64_t>(t, 1);
  return std::sqrt(2.0 * log_m / static_cast<double>(n));
}

std::vector<double> hedge_weights(std::span<const double> cum_losses, double eta) {
  // Shift by the leader's loss so the largest exponent is exactly 0.
  const double leader = *std::min_element(cum_losses.begin(), cum_losses.end());
  std::vector<double> w(cum_losses.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(-eta * (cum_losses[i] - leader));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

std::vector<double> baseline_update(const BaselineKind& kind, std::span<const double> cum_losses,
                                    std::uint64_t t) {
  const std::size_t m = cum_losses.size();
  if (m == 0) throw StructuralError("baseline_update: no experts");
  for (double v : cum_losses) {
    if (!std::isfinite(v)) throw ContractError("baseline_update: non-finite cumulative loss");
  }
  if (const auto* hedge = std::get_if<Hedge>(&kind)) {
    return hedge_weights(cum_losses, hedge_learning_rate(*hedge, m, t));
  }
  if (std::holds_alternative<Uniform>(kind)) {
    return std::vector<double>(m, 1.0 / static_cast<double>(m));
  }
  std::vector<double> w(m, 0.0);
  w[static_cast<std::size_t>(std::min_element(cum_losses.begin(), cum_losses.end()) -
                             cum_losses.begin())] = 1.0;
  return w;
}

BaselineAggregator::BaselineAggregator(BaselineKind kind, std::size_t m, TaskMode mode,
                                       LossKind loss, std::size_t max_pending)
    : Aggregator(m, mode, loss, max_pending), kind_(kind) {
  if (const auto* hedge = std::get_if<Hedge>(&kind_)) {
    if (hedge->eta && !(*hedge->eta > 0.0)) {
      throw ConfigError(fmt::format("hedge eta must be > 0, got {}", *hedge->eta));
    }
    if (hedge->horizon && *hedge->horizon == 0) throw ConfigError("hedge horizon must be positive");
  }
}

void BaselineAggregator::reweight(const PendingFeedback&, std::span<const double>,
                                  StepOutcome& outcome) {
  const auto cum = cumulative_losses();
  weights_ = baseline_update(kind_, cum, updates() + 1);
  if (const auto* hedge = std::get_if<Hedge>(&kind_)) {
    const double eta = hedge_learning_rate(*hedge, num_experts(), updates() + 1);
    outcome.scores.resize(cum.size());
    for (std::size_t i = 0; i < cum.size(); ++i) outcome.scores[i] = -eta * cum[i];
  } else {
    outcome.scores.assign(cum.size(), 0.0);
  }
}

}  // namespace earcp
