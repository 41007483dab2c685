#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "earcp/baselines.hpp"
#include "earcp/errors.hpp"
#include "earcp/factory.hpp"
#include "test_support.hpp"

namespace earcp {
namespace {

using testing::one_hot;

TEST(BaselineUpdate, Examples) {
  const auto h = baseline_update(Hedge{0.5, std::nullopt}, std::vector<double>{1.0, 0.0});
  EXPECT_NEAR(h[0], 0.37754066879814546, 1e-15);
  EXPECT_NEAR(h[1], 0.6224593312018546, 1e-15);
  EXPECT_EQ(baseline_update(Uniform{}, std::vector<double>{3, 1, 4, 1, 5}),
            std::vector<double>(5, 0.2));
  EXPECT_EQ(baseline_update(FollowTheLeader{}, std::vector<double>{0.3, 0.3, 0.9}),
            (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(baseline_update(FollowTheLeader{}, std::vector<double>{0.5, 0.2, 0.2}),
            (std::vector<double>{0, 1, 0}));
}

TEST(BaselineUpdate, HedgeShiftInvariant) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> cum(2 + trial % 10), shifted;
    for (double& c : cum) c = u(rng);
    const double k = u(rng) * 10;
    for (double c : cum) shifted.push_back(c + k);
    const auto a = hedge_weights(cum, 0.7);
    const auto b = hedge_weights(shifted, 0.7);
    for (std::size_t i = 0; i < cum.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  }
}

TEST(BaselineUpdate, TinyRateIsNearlyUniform) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1e4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> cum(10);
    for (double& c : cum) c = u(rng);
    for (double w : hedge_weights(cum, 1e-12)) EXPECT_NEAR(w, 0.1, 1e-9);
  }
}

TEST(HedgeRate, Modes) {
  EXPECT_EQ(hedge_learning_rate(Hedge{0.25, 100}, 10, 5), 0.25);
  EXPECT_DOUBLE_EQ(hedge_learning_rate(Hedge{std::nullopt, 10000}, 10, 5),
                   std::sqrt(2 * std::log(10.0) / 10000));
  EXPECT_DOUBLE_EQ(hedge_learning_rate(Hedge{}, 10, 400), std::sqrt(2 * std::log(10.0) / 400));
  EXPECT_DOUBLE_EQ(hedge_learning_rate(Hedge{}, 10, 0), std::sqrt(2 * std::log(10.0)));
}

TEST(BaselineAggregator, UniformStaysUniform) {
  BaselineAggregator agg(Uniform{}, 4, TaskMode::kClassification, ZeroOneArgmax{});
  for (std::uint64_t t = 1; t <= 50; ++t) {
    agg.predict(std::vector<PredictionVector>{one_hot(3, 0), one_hot(3, 1), one_hot(3, 2),
                                              one_hot(3, 0)});
    const auto out = agg.update(t, one_hot(3, 0));
    for (double w : out.new_weights) EXPECT_EQ(w, 0.25);
  }
}

TEST(BaselineAggregator, HedgeTracksCumulativeLoss) {
  const Hedge hedge{std::nullopt, std::nullopt};
  BaselineAggregator agg(hedge, 3, TaskMode::kRegression, ScaledSquaredError{2.0});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> cum(3, 0.0);
  for (std::uint64_t t = 1; t <= 500; ++t) {
    std::vector<PredictionVector> p{{u(rng)}, {u(rng)}, {u(rng)}};
    agg.predict(p);
    const auto out = agg.update(t, PredictionVector{0.0});
    for (int i = 0; i < 3; ++i) cum[i] += out.per_expert_losses[i];
    const auto want = baseline_update(hedge, cum, t);
    for (int i = 0; i < 3; ++i) ASSERT_NEAR(out.new_weights[i], want[i], 1e-15);
  }
  EXPECT_EQ(std::vector<double>(agg.cumulative_losses().begin(), agg.cumulative_losses().end()),
            cum);
}

TEST(BaselineAggregator, FollowTheLeaderPicksBest) {
  BaselineAggregator agg(FollowTheLeader{}, 3, TaskMode::kClassification, ZeroOneArgmax{});
  agg.predict(std::vector<PredictionVector>{one_hot(2, 1), one_hot(2, 0), one_hot(2, 0)});
  const auto out = agg.update(1, one_hot(2, 0));
  EXPECT_EQ(out.new_weights, (std::vector<double>{0, 1, 0}));
}

TEST(BaselineAggregator, RejectsBadRates) {
  EXPECT_THROW(BaselineAggregator(Hedge{-1.0, std::nullopt}, 2, TaskMode::kRegression,
                                  ScaledSquaredError{}),
               ConfigError);
  EXPECT_THROW(BaselineAggregator(Hedge{std::nullopt, 0}, 2, TaskMode::kRegression,
                                  ScaledSquaredError{}),
               ConfigError);
}

TEST(Factory, BuildsEveryKind) {
  const AggregatorSpec specs[] = {{"a", EarcpConfig{}},
                                  {"b", BaselineKind{Hedge{}}},
                                  {"c", BaselineKind{Uniform{}}},
                                  {"d", BaselineKind{FollowTheLeader{}}}};
  const char* keys[] = {"earcp", "hedge", "uniform", "ftl"};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(kind_key(specs[i]), keys[i]);
    const auto agg = make_aggregator(specs[i], 3, TaskMode::kClassification, ZeroOneArgmax{});
    EXPECT_EQ(agg->name(), keys[i]);
    EXPECT_EQ(agg->num_experts(), 3u);
  }
}

}  // namespace
}  // namespace earcp
