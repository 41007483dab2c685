#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "earcp/core.hpp"
#include "earcp/errors.hpp"
#include "test_support.hpp"

namespace earcp {
namespace {

using testing::random_distribution;
using testing::random_simplex;

TEST(CombinePredictions, SymmetricMixOfOpposites) {
  const std::vector<PredictionVector> p{{1, 0}, {0, 1}};
  const std::vector<double> w{0.5, 0.5};
  EXPECT_EQ(combine_predictions(w, p), (PredictionVector{0.5, 0.5}));
}

TEST(CombinePredictions, DegenerateWeightsReturnThatExpert) {
  const std::vector<PredictionVector> p{{0.3, 0.2, 0.5}, {0.9, 0.05, 0.05}};
  const std::vector<double> w{1.0, 0.0};
  EXPECT_EQ(combine_predictions(w, p), p[0]);
}

TEST(CombinePredictions, HandEvaluatedConvexCombination) {
  const std::vector<PredictionVector> p{{0.8, 0.2}, {0.4, 0.6}};
  const std::vector<double> w{0.25, 0.75};
  const auto out = combine_predictions(w, p, TaskMode::kClassification);
  EXPECT_NEAR(out[0], 0.5, 1e-15);
  EXPECT_NEAR(out[1], 0.5, 1e-15);
}

TEST(CombinePredictions, RejectsShapeAndSimplexViolations) {
  const std::vector<PredictionVector> ragged{{1, 0}, {0, 1, 0}};
  const std::vector<double> w{0.5, 0.5};
  EXPECT_THROW(combine_predictions(w, ragged), StructuralError);

  const std::vector<PredictionVector> p{{1, 0}, {0, 1}};
  const std::vector<double> three{0.2, 0.3, 0.5};
  EXPECT_THROW(combine_predictions(three, p), StructuralError);

  const std::vector<double> off{0.5, 0.6};
  EXPECT_THROW(combine_predictions(off, p), ContractError);
  const std::vector<double> negative{1.5, -0.5};
  EXPECT_THROW(combine_predictions(negative, p), ContractError);
}

TEST(CombinePredictions, RenormalizesDriftedClassificationOutput) {
  // Expert predictions that are valid within tolerance but sum slightly off.
  const std::vector<PredictionVector> p{{0.5 + 6e-10, 0.5}, {0.5 + 6e-10, 0.5}};
  const std::vector<double> w{0.5, 0.5};
  bool renormalized = false;
  combine_predictions(w, p, TaskMode::kClassification, &renormalized);
  EXPECT_FALSE(renormalized);
  const std::vector<PredictionVector> drifted{{0.5 + 2e-9, 0.5}, {0.5 + 2e-9, 0.5}};
  EXPECT_NO_THROW(combine_predictions(w, drifted, TaskMode::kClassification, &renormalized));
  EXPECT_TRUE(renormalized);
}

TEST(CombinePredictions, LinearInWeights) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 2 + trial % 7;
    const std::size_t d = 1 + trial % 5;
    std::vector<PredictionVector> p;
    for (std::size_t i = 0; i < m; ++i) p.push_back(random_distribution(rng, d));
    const auto w1 = random_simplex(rng, m);
    const auto w2 = random_simplex(rng, m);
    const double lambda = unit(rng);
    std::vector<double> mixed(m);
    for (std::size_t i = 0; i < m; ++i) mixed[i] = lambda * w1[i] + (1 - lambda) * w2[i];
    const auto a = combine_predictions(mixed, p);
    const auto b1 = combine_predictions(w1, p);
    const auto b2 = combine_predictions(w2, p);
    for (std::size_t j = 0; j < d; ++j) {
      EXPECT_NEAR(a[j], lambda * b1[j] + (1 - lambda) * b2[j], 1e-12);
    }
  }
}

TEST(WeightEntropy, KnownValues) {
  EXPECT_NEAR(weight_entropy(std::vector<double>(4, 0.25)), std::log(4.0), 1e-15);
  EXPECT_NEAR(weight_entropy(std::vector<double>(4, 0.25)), 1.386294, 1e-6);
  EXPECT_EQ(weight_entropy(std::vector<double>{1, 0, 0}), 0.0);
  EXPECT_NEAR(weight_entropy(std::vector<double>{0.9, 0.1}), 0.3250829733914482, 1e-15);
}

TEST(WeightEntropy, BoundedByLogM) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 2 + trial % 30;
    const auto w = random_simplex(rng, m);
    const double h = weight_entropy(w);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log(static_cast<double>(m)));
  }
}

TEST(Argmax, LowestIndexOnTies) {
  EXPECT_EQ(argmax(std::vector<double>{0.2, 0.4, 0.4}), 1u);
  EXPECT_EQ(argmax(std::vector<double>{0.5, 0.5}), 0u);
}

TEST(EarcpConfig, DefaultsAreTheRecommendedOperatingPoint) {
  const EarcpConfig c;
  EXPECT_EQ(c.alpha_p, 0.9);
  EXPECT_EQ(c.alpha_c, 0.85);
  EXPECT_EQ(c.beta, 0.7);
  EXPECT_EQ(c.eta_s, 5.0);
  EXPECT_EQ(c.w_min, 0.05);
  EXPECT_EQ(c.s_max, 10.0);
  EXPECT_EQ(c.norm_window, 50u);
  EXPECT_NO_THROW(c.validate_for(4));
}

TEST(EarcpConfig, RangeViolationsAreConfigErrors) {
  auto expect_bad = [](auto mutate, std::size_t m = 4) {
    EarcpConfig c;
    mutate(c);
    EXPECT_THROW(c.validate_for(m), ConfigError);
  };
  expect_bad([](EarcpConfig& c) { c.alpha_p = 1.0; });
  expect_bad([](EarcpConfig& c) { c.alpha_c = 0.0; });
  expect_bad([](EarcpConfig& c) { c.beta = 1.5; });
  expect_bad([](EarcpConfig& c) { c.eta_s = 0.0; });
  expect_bad([](EarcpConfig& c) { c.s_max = -1.0; });
  expect_bad([](EarcpConfig& c) { c.gamma = 0.0; });
  expect_bad([](EarcpConfig& c) { c.epsilon = 0.0; });
  expect_bad([](EarcpConfig& c) { c.norm_window = 0; });
  expect_bad([](EarcpConfig& c) { c.w_min = 0.25; });  // 0.25 * 4 = 1
  expect_bad([](EarcpConfig& c) { c.coherence_sample_k = 4; });
  expect_bad([](EarcpConfig& c) {}, 1);
  try {
    EarcpConfig c;
    c.beta = 1.5;
    c.validate();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("[0, 1]"), std::string::npos);
  }
}

TEST(AggregatorState, InitialValues) {
  const auto s = AggregatorState::initial(4);
  EXPECT_EQ(s.t, 0u);
  EXPECT_EQ(s.weights, std::vector<double>(4, 0.25));
  EXPECT_EQ(s.perf, std::vector<double>(4, 0.0));
  EXPECT_EQ(s.coh, std::vector<double>(4, 0.5));
  EXPECT_EQ(s.cum_loss, std::vector<double>(4, 0.0));
}

}  // namespace
}  // namespace earcp
