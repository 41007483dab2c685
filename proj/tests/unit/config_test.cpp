#include <algorithm>
#include <string>

#include <gtest/gtest.h>

#include "earcp/config.hpp"
#include "earcp/errors.hpp"

namespace earcp {
namespace {

const std::string kMinimal = R"cfg(seeds = [1, 2]

[aggregator.main]
kind = "earcp"

[scenario]
mode = "classification"
m = 3
d = 4
horizon = 100
experts = ["accurate(0.1)", "random", "collusive(0,0.5)"]
)cfg";

std::vector<std::string> issues_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigParseError& e) {
    return e.issues();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& issues, const std::string& needle) {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

TEST(ParseConfig, Minimal) {
  const auto c = parse_config(kMinimal);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 2}));
  ASSERT_EQ(c.aggregators.size(), 1u);
  EXPECT_EQ(c.aggregators[0].name, "main");
  EXPECT_EQ(std::get<EarcpConfig>(c.aggregators[0].kind), EarcpConfig{});
  const auto& s = std::get<ScenarioSpec>(c.input);
  EXPECT_EQ(s.m, 3u);
  EXPECT_EQ(s.experts[2], (ExpertBehavior{CollusiveWrong{0, 0.5}}));
  EXPECT_EQ(c.num_experts(), 3u);
  EXPECT_EQ(c.mode(), TaskMode::kClassification);
  EXPECT_EQ(c.loss, LossKind{ScaledSquaredError{1.0}});
  EXPECT_EQ(c.output_dir, "results");
}

TEST(ParseConfig, AllAggregatorKinds) {
  const auto c = parse_config(kMinimal + R"cfg(
[aggregator.tuned]
kind = "earcp"
beta = 0.5
norm_window = "unbounded"
coherence_sample_k = 1
hedge_compat = true

[aggregator.hedge]
kind = "hedge"
eta = 0.25

[aggregator.anytime]
kind = "hedge"

[aggregator.flat]
kind = "uniform"

[aggregator.leader]
kind = "ftl"
)cfg");
  ASSERT_EQ(c.aggregators.size(), 6u);
  const auto& tuned = std::get<EarcpConfig>(c.aggregators[1].kind);
  EXPECT_EQ(tuned.beta, 0.5);
  EXPECT_FALSE(tuned.norm_window);
  EXPECT_EQ(tuned.coherence_sample_k, 1u);
  EXPECT_TRUE(tuned.hedge_compat);
  EXPECT_EQ(std::get<BaselineKind>(c.aggregators[2].kind),
            (BaselineKind{Hedge{0.25, std::nullopt}}));
  EXPECT_EQ(std::get<BaselineKind>(c.aggregators[3].kind), BaselineKind{Hedge{}});
  EXPECT_EQ(std::get<BaselineKind>(c.aggregators[4].kind), BaselineKind{Uniform{}});
  EXPECT_EQ(std::get<BaselineKind>(c.aggregators[5].kind), BaselineKind{FollowTheLeader{}});
}

TEST(ParseConfig, BetaOutOfRangeNamesFieldAndRange) {
  auto text = kMinimal;
  text.insert(text.find("[scenario]"), "beta = 1.5\n\n");
  const auto issues = issues_of(text);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues[0].find("line 6"), std::string::npos) << issues[0];
  EXPECT_NE(issues[0].find("beta"), std::string::npos);
  EXPECT_NE(issues[0].find("[0, 1]"), std::string::npos);
}

TEST(ParseConfig, ReportsEveryProblem) {
  const auto issues = issues_of(R"cfg(seeds = []
colour = "blue"

[aggregator.a]
kind = "earcp"
alpha_p = 1.0
w_min = 0.4
mystery = 3

[aggregator.b]
kind = "boosting"

[scenario]
mode = "classification"
m = 3
d = 2
horizon = 10
experts = ["random", "random", "random"]

[extras]
x = 1
)cfg");
  EXPECT_TRUE(any_contains(issues, "seeds")) << ::testing::PrintToString(issues);
  EXPECT_TRUE(any_contains(issues, "colour"));
  EXPECT_TRUE(any_contains(issues, "alpha_p"));
  EXPECT_TRUE(any_contains(issues, "mystery"));
  EXPECT_TRUE(any_contains(issues, "boosting"));
  EXPECT_TRUE(any_contains(issues, "w_min"));
  EXPECT_TRUE(any_contains(issues, "[extras]"));
  for (const auto& issue : issues) EXPECT_EQ(issue.rfind("line ", 0), 0u) << issue;
}

TEST(ParseConfig, ExpertCountMismatch) {
  auto text = kMinimal;
  text.replace(text.find("m = 3"), 5, "m = 4");
  EXPECT_TRUE(any_contains(issues_of(text), "expert behaviors"));
}

TEST(ParseConfig, SyntaxErrors) {
  EXPECT_FALSE(issues_of("seeds = [1\n").empty());
  EXPECT_FALSE(issues_of("[aggregator.x\nkind = \"earcp\"\n").empty());
  EXPECT_FALSE(issues_of(kMinimal + "m = 4\n").empty());
  EXPECT_FALSE(issues_of(kMinimal + "[scenario]\n").empty());
  EXPECT_FALSE(issues_of("seeds = [1]\n").empty());
}

TEST(ParseConfig, LossAndCsvInput) {
  const auto c = parse_config(R"cfg(seeds = [3]
loss = "xent"
loss_clip = 0.05
output_dir = "out/x"

[aggregator.e]
kind = "earcp"

[csv]
path = "streams/a.csv"
mode = "regression"
m = 5
d = 2
delay = 4
change_points = [10, 20]
)cfg");
  EXPECT_EQ(c.loss, LossKind{ClippedCrossEntropy{0.05}});
  const auto& csv = std::get<CsvInput>(c.input);
  EXPECT_EQ(csv.path, "streams/a.csv");
  EXPECT_EQ(csv.m, 5u);
  EXPECT_EQ(csv.delay, 4u);
  EXPECT_EQ(c.change_points(), (std::vector<std::uint64_t>{10, 20}));
  EXPECT_EQ(c.mode(), TaskMode::kRegression);
}

TEST(RenderConfig, RoundTrips) {
  const auto c = parse_config(kMinimal + R"cfg(
[aggregator.tuned]
kind = "earcp"
beta = 0.30000000000000004
alpha_c = 0.9
norm_window = "unbounded"

[aggregator.h]
kind = "hedge"
horizon = 100

[grid]
beta = [0, 0.5, 1]
w_min = [0, 0.1]
)cfg");
  const auto text = render_config(c);
  EXPECT_EQ(parse_config(text), c) << text;
  EXPECT_EQ(render_config(parse_config(text)), text);
}

TEST(Grid, BetaAxisGivesSixCells) {
  const auto c = parse_config(kMinimal + "\n[grid]\nbeta = [0, 0.3, 0.5, 0.7, 0.9, 1]\n");
  const auto cells = expand_grid(c.grid);
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[1].label(), "beta=0.3");
  EXPECT_EQ(cells[1].apply({}).beta, 0.3);
  EXPECT_EQ(cells[5].apply({}).beta, 1.0);
}

TEST(Grid, CartesianOrder) {
  const std::vector<GridAxis> grid{{"beta", {0.1, 0.2}}, {"alpha_p", {0.7, 0.8, 0.9}}};
  const auto cells = expand_grid(grid);
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[0].label(), "beta=0.1;alpha_p=0.7");
  EXPECT_EQ(cells[2].label(), "beta=0.1;alpha_p=0.9");
  EXPECT_EQ(cells[3].label(), "beta=0.2;alpha_p=0.7");
  EXPECT_EQ(expand_grid({}).size(), 1u);
  EXPECT_EQ(expand_grid({})[0].label(), "-");
}

TEST(Grid, RejectsUnknownOrInvalidAxes) {
  EXPECT_TRUE(any_contains(issues_of(kMinimal + "\n[grid]\nnorm_window = [5]\n"), "norm_window"));
  EXPECT_TRUE(any_contains(issues_of(kMinimal + "\n[grid]\nbeta = [2]\n"), "beta"));
  EXPECT_TRUE(any_contains(issues_of(kMinimal + "\n[grid]\nw_min = [0.5]\n"), "w_min"));
  EXPECT_TRUE(any_contains(issues_of(kMinimal + "\n[grid]\nbeta = []\n"), "beta"));
}

}  // namespace
}  // namespace earcp
