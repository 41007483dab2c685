#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "earcp/core.hpp"
#include "earcp/factory.hpp"
#include "earcp/losses.hpp"
#include "earcp/metrics.hpp"
#include "earcp/stream.hpp"

namespace earcp {

// Expert behaviors. In classification mode every emitted prediction is a
// one-hot vector except Biased, which shifts the one-hot target by the
// offset, clamps at zero and renormalizes.

// Right answer, corrupted by noise: a uniformly random class with
// probability min(noise, 1), or Gaussian noise of that scale in regression.
struct Accurate {
  double noise = 0.0;
  friend bool operator==(const Accurate&, const Accurate&) = default;
};

// Target plus a fixed offset vector of length d.
struct Biased {
  std::vector<double> offset;
  friend bool operator==(const Biased&, const Biased&) = default;
};

// Uniform class, or uniform in [-1, 1] per component.
struct RandomGuess {
  friend bool operator==(const RandomGuess&, const RandomGuess&) = default;
};

// Members of a group share one wrong answer per step; each member follows
// it with probability agree_prob and otherwise gives its own wrong answer.
struct CollusiveWrong {
  std::uint64_t group_id = 0;
  double agree_prob = 1.0;
  friend bool operator==(const CollusiveWrong&, const CollusiveWrong&) = default;
};

using ExpertBehavior = std::variant<Accurate, Biased, RandomGuess, CollusiveWrong>;

/// Compact text form: "accurate(0.1)", "biased(0.5,-0.2)", "random",
/// "collusive(0,0.9)".
std::string to_string(const ExpertBehavior& behavior);
ExpertBehavior parse_behavior(const std::string& text);

/// Synthetic stream description. At each change point the behavior list is
/// rotated by one position: expert e then follows behavior (e - r) mod M,
/// where r is the number of change points reached so far.
struct ScenarioSpec {
  TaskMode mode = TaskMode::kClassification;
  std::size_t m = 2;
  std::size_t d = 2;
  std::uint64_t horizon = 1;
  std::vector<ExpertBehavior> experts;
  std::vector<std::uint64_t> change_points;
  std::uint64_t delay = 0;
  std::uint64_t seed = 0;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Index into spec.experts that expert `e` follows at step t.
std::size_t behavior_index(const ScenarioSpec& spec, std::size_t e, std::uint64_t t);

/// Predictions and target for step t (1-based). A pure function of
/// (spec, t); all randomness comes from SplitMix64 streams keyed by
/// (seed, t, expert).
///
/// Classification targets are one-hot over i.i.d. uniform classes.
/// Regression targets are two sinusoids per component, amplitudes 0.6 and
/// 0.3 with seeded periods and phases, plus N(0, 0.05^2) noise.
StreamStep generate_step(const ScenarioSpec& spec, std::uint64_t t);

/// Source that yields steps 1..horizon.
StreamSource scenario_source(const ScenarioSpec& spec);

/// Runs a fresh aggregator over the whole scenario, honoring its delay.
Trace run_scenario(const ScenarioSpec& spec, const AggregatorSpec& aggregator,
                   const LossKind& loss);

}  // namespace earcp
