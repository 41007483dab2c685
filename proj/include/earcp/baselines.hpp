#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "earcp/aggregator.hpp"

namespace earcp {

/// Multiplicative weights on cumulative loss. With a fixed `eta` the rate
/// is constant; otherwise it is sqrt(2 ln M / horizon) when a horizon is
/// declared, else the anytime rate sqrt(2 ln M / t) recomputed each step.
struct Hedge {
  std::optional<double> eta;
  std::optional<std::uint64_t> horizon;
  friend bool operator==(const Hedge&, const Hedge&) = default;
};

struct Uniform {
  friend bool operator==(const Uniform&, const Uniform&) = default;
};

// Diagnostic baseline: all mass on the current leader.
struct FollowTheLeader {
  friend bool operator==(const FollowTheLeader&, const FollowTheLeader&) = default;
};

using BaselineKind = std::variant<Hedge, Uniform, FollowTheLeader>;

/// "hedge", "uniform" or "ftl".
std::string_view baseline_key(const BaselineKind& kind);

/// Learning rate Hedge uses after `t` completed steps.
double hedge_learning_rate(const Hedge& hedge, std::size_t m, std::uint64_t t);

/// Hedge weights w_i proportional to exp(-eta * cum_losses[i]).
std::vector<double> hedge_weights(std::span<const double> cum_losses, double eta);

/// Weights the baseline assigns given caller-held cumulative losses after
/// `t` steps (t only matters for the anytime Hedge rate).
std::vector<double> baseline_update(const BaselineKind& kind, std::span<const double> cum_losses,
                                    std::uint64_t t = 1);

class BaselineAggregator final : public Aggregator {
 public:
  BaselineAggregator(BaselineKind kind, std::size_t m, TaskMode mode, LossKind loss,
                     std::size_t max_pending = kDefaultMaxPending);

  std::string_view name() const override { return baseline_key(kind_); }
  const BaselineKind& kind() const { return kind_; }

 protected:
  void reweight(const PendingFeedback& entry, std::span<const double> losses,
                StepOutcome& outcome) override;

 private:
  BaselineKind kind_;
};

}  // namespace earcp
