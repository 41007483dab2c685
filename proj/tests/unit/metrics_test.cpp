#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "earcp/errors.hpp"
#include "earcp/metrics.hpp"

namespace earcp {
namespace {

ExperimentRecord record(std::uint64_t step, double ensemble, std::vector<double> experts) {
  ExperimentRecord r;
  r.step = step;
  r.ensemble_loss = ensemble;
  r.per_expert_loss = std::move(experts);
  r.weights.assign(r.per_expert_loss.size(), 1.0 / static_cast<double>(r.per_expert_loss.size()));
  r.scores.assign(r.per_expert_loss.size(), 0.0);
  return r;
}

double brute_regret(const Trace& t, std::size_t from, std::size_t to) {
  if (from == to) return 0.0;
  double ens = 0;
  std::vector<double> cum(t[from].per_expert_loss.size(), 0.0);
  for (std::size_t i = from; i < to; ++i) {
    ens += t[i].ensemble_loss;
    for (std::size_t e = 0; e < cum.size(); ++e) cum[e] += t[i].per_expert_loss[e];
  }
  return ens - *std::min_element(cum.begin(), cum.end());
}

Trace random_trace(std::mt19937_64& rng, std::size_t steps, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Trace t;
  for (std::size_t s = 1; s <= steps; ++s) {
    std::vector<double> l(m);
    for (double& x : l) x = u(rng);
    t.push_back(record(s, u(rng), l));
  }
  return t;
}

TEST(Regret, Examples) {
  const Trace t{record(1, 0.5, {0.4, 0.6}), record(2, 0.5, {0.4, 0.6})};
  EXPECT_NEAR(regret(t), 0.2, 1e-15);
  const Trace tracking{record(1, 0.3, {0.3, 0.9}), record(2, 0.1, {0.1, 0.0})};
  EXPECT_NEAR(regret(tracking), 0.4 - 0.4, 1e-15);
  EXPECT_EQ(regret(Trace{record(1, 0.7, {0.7, 0.9})}), 0.0);
  EXPECT_THROW(regret(Trace{}), ContractError);
}

TEST(Regret, MatchesBruteForce) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = random_trace(rng, 1 + trial % 50, 2 + trial % 5);
    EXPECT_NEAR(regret(t), brute_regret(t, 0, t.size()), 1e-12);
  }
}

TEST(SegmentRegret, Examples) {
  const Trace t{record(1, 0.0, {0.0, 1.0}), record(2, 0.0, {0.0, 1.0}),
                record(3, 0.0, {1.0, 0.0}), record(4, 0.0, {1.0, 0.0})};
  EXPECT_EQ(segment_regret(t, std::vector<std::uint64_t>{3}), (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(segment_regret(t, std::vector<std::uint64_t>{}), std::vector<double>{regret(t)});
  // A change point at step 1 leaves the first segment empty.
  EXPECT_EQ(segment_regret(t, std::vector<std::uint64_t>{1}),
            (std::vector<double>{0.0, regret(t)}));
}

TEST(SegmentRegret, MatchesBruteForce) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = random_trace(rng, 10 + trial % 40, 3);
    std::uniform_int_distribution<std::uint64_t> pick(2, t.size());
    const std::uint64_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    const std::vector<std::uint64_t> cps{std::min(a, b), std::max(a, b)};
    const auto got = segment_regret(t, cps);
    ASSERT_EQ(got.size(), 3u);
    EXPECT_NEAR(got[0], brute_regret(t, 0, cps[0] - 1), 1e-12);
    EXPECT_NEAR(got[1], brute_regret(t, cps[0] - 1, cps[1] - 1), 1e-12);
    EXPECT_NEAR(got[2], brute_regret(t, cps[1] - 1, t.size()), 1e-12);
  }
}

TEST(SegmentRegret, RejectsMalformedChangePoints) {
  std::mt19937_64 rng(3);
  const auto t = random_trace(rng, 10, 2);
  EXPECT_THROW(segment_regret(t, std::vector<std::uint64_t>{5, 5}), ContractError);
  EXPECT_THROW(segment_regret(t, std::vector<std::uint64_t>{6, 4}), ContractError);
  EXPECT_THROW(segment_regret(t, std::vector<std::uint64_t>{0}), ContractError);
  EXPECT_THROW(segment_regret(t, std::vector<std::uint64_t>{11}), ContractError);
}

TEST(Summarize, Examples) {
  const auto s = summarize_metric("x", std::vector<double>{1.0, 3.0});
  EXPECT_EQ(s.runs, 2u);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_NEAR(s.std_dev, 1.4142135623730951, 1e-15);
  EXPECT_GE(s.ci_low, 1.0);
  EXPECT_LE(s.ci_high, 3.0);

  const auto c = summarize_metric("c", std::vector<double>(7, 0.42));
  EXPECT_EQ(c.std_dev, 0.0);
  EXPECT_EQ(c.ci_low, 0.42);
  EXPECT_EQ(c.ci_high, 0.42);
  EXPECT_THROW(summarize_metric("y", std::vector<double>{1.0}), ContractError);
}

TEST(Summarize, PermutationInvariantAndSeeded) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(5.0, 2.0);
  std::vector<double> v(25);
  for (double& x : v) x = n(rng);
  const auto a = summarize_metric("m", v, 11);
  std::shuffle(v.begin(), v.end(), rng);
  EXPECT_EQ(summarize_metric("m", v, 11), a);
  EXPECT_LE(a.ci_low, a.mean);
  EXPECT_GE(a.ci_high, a.mean);
}

TEST(Summarize, RunLevelMetrics) {
  std::mt19937_64 rng(5);
  const std::vector<Trace> runs{random_trace(rng, 20, 3), random_trace(rng, 20, 3),
                                random_trace(rng, 20, 3)};
  const auto rows = summarize(runs, 1);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].metric, "final_regret");
  double mean = 0;
  for (const auto& r : runs) mean += regret(r) / 3.0;
  EXPECT_NEAR(rows[0].mean, mean, 1e-12);
  EXPECT_THROW(summarize({runs[0]}), ContractError);
}

TEST(TraceCsv, Format) {
  Trace t{record(1, 0.1, {0.25, 1.0 / 3.0})};
  t[0].entropy = std::log(2.0);
  std::ostringstream out;
  write_trace_csv(out, t);
  EXPECT_EQ(out.str(),
            "step,ensemble_loss,entropy,w_0,w_1,l_0,l_1,s_0,s_1\n"
            "1,0.10000000000000001,0.69314718055994529,0.5,0.5,0.25,0.33333333333333331,0,0\n");
}

TEST(FormatReal, RoundTrips) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(std::stod(format_real(x)), x);
  }
}

}  // namespace
}  // namespace earcp
