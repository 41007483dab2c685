#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "earcp/errors.hpp"
#include "earcp/losses.hpp"
#include "test_support.hpp"

namespace earcp {
namespace {

using testing::random_distribution;

TEST(EvaluateLoss, ZeroOneMatchingArgmax) {
  EXPECT_EQ(evaluate_loss(ZeroOneArgmax{}, {0.7, 0.3}, {1, 0}), 0.0);
  EXPECT_EQ(evaluate_loss(ZeroOneArgmax{}, {0.3, 0.7}, {1, 0}), 1.0);
}

TEST(EvaluateLoss, SquaredErrorIdentityAndSaturation) {
  EXPECT_EQ(evaluate_loss(ScaledSquaredError{1.0}, {0.2, -1.5}, {0.2, -1.5}), 0.0);
  EXPECT_DOUBLE_EQ(evaluate_loss(ScaledSquaredError{2.0}, {1.0}, {0.0}), 0.25);
  EXPECT_EQ(evaluate_loss(ScaledSquaredError{1.0}, {3.0}, {0.0}), 1.0);
}

TEST(EvaluateLoss, ClippedCrossEntropyHandEvaluated) {
  EXPECT_NEAR(evaluate_loss(ClippedCrossEntropy{0.01}, {0.5, 0.5}, {1, 0}), 0.15051499783199057,
              1e-15);
  EXPECT_EQ(evaluate_loss(ClippedCrossEntropy{0.01}, {1.0, 0.0}, {1, 0}), 0.0);
  EXPECT_EQ(evaluate_loss(ClippedCrossEntropy{0.01}, {0.0, 1.0}, {1, 0}), 1.0);
  // A soft target uses its most likely class.
  EXPECT_NEAR(evaluate_loss(ClippedCrossEntropy{0.01}, {0.5, 0.5}, {0.8, 0.2}),
              0.15051499783199057, 1e-15);
}

TEST(EvaluateLoss, Errors) {
  EXPECT_THROW(evaluate_loss(ZeroOneArgmax{}, {1, 0}, {1, 0, 0}), StructuralError);
  EXPECT_THROW(evaluate_loss(ScaledSquaredError{1}, {NAN}, {0}), ContractError);
  EXPECT_THROW(evaluate_loss(ScaledSquaredError{1}, {0}, {INFINITY}), ContractError);
}

TEST(LossKind, KeysAndValidation) {
  EXPECT_EQ(loss_key(loss_from_key("sq", 2.0)), "sq");
  EXPECT_EQ(loss_key(loss_from_key("zero_one", 0.0)), "zero_one");
  EXPECT_EQ(loss_key(loss_from_key("xent", 0.05)), "xent");
  EXPECT_THROW(loss_from_key("hinge", 1.0), ConfigError);
  EXPECT_THROW(loss_from_key("sq", 0.0), ConfigError);
  EXPECT_THROW(loss_from_key("xent", 1.0), ConfigError);
  EXPECT_TRUE(is_convex(ScaledSquaredError{}));
  EXPECT_FALSE(is_convex(ZeroOneArgmax{}));
}

TEST(EvaluateLoss, BoundedForEveryKind) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> wide(0.0, 5.0);
  const LossKind kinds[] = {ScaledSquaredError{0.5}, ZeroOneArgmax{}, ClippedCrossEntropy{0.01}};
  for (const auto& kind : kinds) {
    for (int trial = 0; trial < 100000; ++trial) {
      const std::size_t d = 1 + trial % 6;
      PredictionVector p, y;
      if (std::holds_alternative<ScaledSquaredError>(kind)) {
        std::vector<double> a(d), b(d);
        for (std::size_t j = 0; j < d; ++j) a[j] = wide(rng), b[j] = wide(rng);
        p = PredictionVector(a);
        y = PredictionVector(b);
      } else {
        p = random_distribution(rng, d);
        y = random_distribution(rng, d);
      }
      const double l = evaluate_loss(kind, p, y);
      ASSERT_GE(l, 0.0);
      ASSERT_LE(l, 1.0);
    }
  }
}

TEST(EvaluateLoss, SquaredErrorConvexBelowSaturation) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(-0.5, 0.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const LossKind kind = ScaledSquaredError{2.0};
  int checked = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const std::size_t d = 1 + trial % 4;
    std::vector<double> a(d), b(d), y(d);
    for (std::size_t j = 0; j < d; ++j) a[j] = coord(rng), b[j] = coord(rng), y[j] = coord(rng);
    const double la = evaluate_loss(kind, PredictionVector(a), PredictionVector(y));
    const double lb = evaluate_loss(kind, PredictionVector(b), PredictionVector(y));
    if (la >= 1.0 || lb >= 1.0) continue;
    const double lambda = unit(rng);
    std::vector<double> mix(d);
    for (std::size_t j = 0; j < d; ++j) mix[j] = lambda * a[j] + (1 - lambda) * b[j];
    const double lm = evaluate_loss(kind, PredictionVector(mix), PredictionVector(y));
    EXPECT_LE(lm, lambda * la + (1 - lambda) * lb + 1e-10);
    ++checked;
  }
  EXPECT_GT(checked, 10000);
}

TEST(EvaluateLoss, ZeroOnePermutationEquivariant) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::size_t d = 2 + trial % 8;
    auto p = random_distribution(rng, d);
    auto y = random_distribution(rng, d);
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pp(d), yp(d);
    for (std::size_t j = 0; j < d; ++j) pp[j] = p[perm[j]], yp[j] = y[perm[j]];
    EXPECT_EQ(evaluate_loss(ZeroOneArgmax{}, p, y),
              evaluate_loss(ZeroOneArgmax{}, PredictionVector(pp), PredictionVector(yp)));
  }
}

}  // namespace
}  // namespace earcp
