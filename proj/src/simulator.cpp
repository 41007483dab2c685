#include "earcp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "earcp/errors.hpp"
#include "earcp/rng.hpp"

namespace earcp {

namespace {

constexpr std::uint64_t kTargetStream = ~std::uint64_t{0};
constexpr std::uint64_t kSignalStream = ~std::uint64_t{0} - 1;
constexpr std::uint64_t kGroupStreamBase = std::uint64_t{1} << 32;

constexpr double kPrimaryAmplitude = 0.6;
constexpr double kSecondaryAmplitude = 0.3;
constexpr double kTargetNoise = 0.05;

PredictionVector one_hot(std::size_t d, std::size_t cls) {
  std::vector<double> v(d, 0.0);
  v[cls] = 1.0;
  return PredictionVector(std::move(v));
}

// A class different from `truth`, uniform over the other d - 1.
std::size_t wrong_class(SplitMix64& rng, std::size_t d, std::size_t truth) {
  return (truth + 1 + rng.bounded(d - 1)) % d;
}

std::vector<double> wrong_offset(SplitMix64& rng, std::size_t d) {
  std::vector<double> off(d);
  for (double& x : off) {
    const double magnitude = 0.5 + 0.5 * rng.uniform();
    x = rng.bernoulli(0.5) ? magnitude : -magnitude;
  }
  return off;
}

std::vector<double> clean_signal(const ScenarioSpec& spec, std::uint64_t t) {
  SplitMix64 rng(spec.seed, 0, kSignalStream);
  std::vector<double> y(spec.d);
  const double tt = static_cast<double>(t);
  for (double& v : y) {
    const double p1 = 50.0 + 100.0 * rng.uniform();
    const double p2 = 10.0 + 20.0 * rng.uniform();
    const double ph1 = 2.0 * std::numbers::pi * rng.uniform();
    const double ph2 = 2.0 * std::numbers::pi * rng.uniform();
    v = kPrimaryAmplitude * std::sin(2.0 * std::numbers::pi * tt / p1 + ph1) +
        kSecondaryAmplitude * std::sin(2.0 * std::numbers::pi * tt / p2 + ph2);
  }
  return y;
}

PredictionVector classification_prediction(const ScenarioSpec& spec, const ExpertBehavior& b,
                                           std::size_t truth, std::uint64_t t, std::size_t e) {
  const std::size_t d = spec.d;
  SplitMix64 rng(spec.seed, t, e);
  if (const auto* acc = std::get_if<Accurate>(&b)) {
    return one_hot(d, rng.uniform() < acc->noise ? rng.bounded(d) : truth);
  }
  if (const auto* biased = std::get_if<Biased>(&b)) {
    std::vector<double> v(d);
    double sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      v[j] = std::max(0.0, (j == truth ? 1.0 : 0.0) + biased->offset[j]);
      sum += v[j];
    }
    for (double& x : v) x = sum > 0.0 ? x / sum : 1.0 / static_cast<double>(d);
    return PredictionVector(std::move(v));
  }
  if (std::holds_alternative<RandomGuess>(b)) return one_hot(d, rng.bounded(d));

  const auto& col = std::get<CollusiveWrong>(b);
  SplitMix64 group(spec.seed, t, kGroupStreamBase + col.group_id);
  const std::size_t shared = wrong_class(group, d, truth);
  return one_hot(d, rng.uniform() < col.agree_prob ? shared : wrong_class(rng, d, truth));
}

PredictionVector regression_prediction(const ScenarioSpec& spec, const ExpertBehavior& b,
                                       const PredictionVector& target, std::uint64_t t,
                                       std::size_t e) {
  SplitMix64 rng(spec.seed, t, e);
  std::vector<double> v(target.begin(), target.end());
  if (const auto* acc = std::get_if<Accurate>(&b)) {
    if (acc->noise > 0.0) {
      for (double& x : v) x += acc->noise * rng.normal();
    }
  } else if (const auto* biased = std::get_if<Biased>(&b)) {
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += biased->offset[j];
  } else if (std::holds_alternative<RandomGuess>(b)) {
    for (double& x : v) x = 2.0 * rng.uniform() - 1.0;
  } else {
    const auto& col = std::get<CollusiveWrong>(b);
    SplitMix64 group(spec.seed, t, kGroupStreamBase + col.group_id);
    const auto shared = wrong_offset(group, spec.d);
    const auto off = rng.uniform() < col.agree_prob ? shared : wrong_offset(rng, spec.d);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += off[j];
  }
  return PredictionVector(std::move(v));
}

std::vector<double> parse_numbers(const std::string& args) {
  std::vector<double> out;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::string to_string(const ExpertBehavior& behavior) {
  if (const auto* acc = std::get_if<Accurate>(&behavior)) {
    return fmt::format("accurate({:.17g})", acc->noise);
  }
  if (const auto* biased = std::get_if<Biased>(&behavior)) {
    std::string out = "biased(";
    for (std::size_t j = 0; j < biased->offset.size(); ++j) {
      out += fmt::format("{}{:.17g}", j ? "," : "", biased->offset[j]);
    }
    return out + ")";
  }
  if (std::holds_alternative<RandomGuess>(behavior)) return "random";
  const auto& col = std::get<CollusiveWrong>(behavior);
  return fmt::format("collusive({},{:.17g})", col.group_id, col.agree_prob);
}

ExpertBehavior parse_behavior(const std::string& text) {
  static const std::regex kForm(R"(\s*([a-z]+)\s*(?:\(([^)]*)\))?\s*)");
  std::smatch match;
  if (!std::regex_match(text, match, kForm)) {
    throw ConfigError(fmt::format("cannot parse expert behavior '{}'", text));
  }
  const std::string name = match[1];
  const bool has_args = match[2].matched;
  std::vector<double> args;
  try {
    if (has_args) args = parse_numbers(match[2]);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("bad numeric argument in expert behavior '{}'", text));
  }
  if (name == "random" && args.empty()) return RandomGuess{};
  if (name == "accurate" && args.size() <= 1) return Accurate{args.empty() ? 0.0 : args[0]};
  if (name == "biased" && !args.empty()) return Biased{args};
  if (name == "collusive" && args.size() == 2 && args[0] >= 0 && args[0] == std::floor(args[0])) {
    return CollusiveWrong{static_cast<std::uint64_t>(args[0]), args[1]};
  }
  throw ConfigError(fmt::format(
      "unknown expert behavior '{}' (expected accurate(noise), biased(o_0,...), random, "
      "collusive(group,agree_prob))",
      text));
}

void ScenarioSpec::validate() const {
  if (m < 2) throw ConfigError(fmt::format("scenario: m must be >= 2, got {}", m));
  if (d < 1) throw ConfigError("scenario: d must be >= 1");
  if (mode == TaskMode::kClassification && d < 2) {
    throw ConfigError("scenario: classification needs d >= 2 classes");
  }
  if (horizon < 1) throw ConfigError("scenario: horizon must be >= 1");
  if (experts.size() != m) {
    throw ConfigError(fmt::format("scenario: {} expert behaviors for m = {}", experts.size(), m));
  }
  for (std::size_t c = 0; c < change_points.size(); ++c) {
    const auto cp = change_points[c];
    if (cp <= 1 || cp >= horizon || (c > 0 && cp <= change_points[c - 1])) {
      throw ConfigError(fmt::format(
          "scenario: change_points must be strictly increasing within (1, {}), offending value {}",
          horizon, cp));
    }
  }
  if (delay >= horizon) {
    throw ConfigError(fmt::format("scenario: delay must be < horizon ({}), got {}", horizon, delay));
  }
  for (std::size_t e = 0; e < experts.size(); ++e) {
    const auto& b = experts[e];
    if (const auto* acc = std::get_if<Accurate>(&b); acc && !(acc->noise >= 0.0)) {
      throw ConfigError(fmt::format("scenario: expert {} noise must be >= 0", e));
    }
    if (const auto* biased = std::get_if<Biased>(&b); biased && biased->offset.size() != d) {
      throw ConfigError(fmt::format("scenario: expert {} offset has {} entries, d = {}", e,
                                    biased->offset.size(), d));
    }
    if (const auto* col = std::get_if<CollusiveWrong>(&b)) {
      if (!(col->agree_prob >= 0.0 && col->agree_prob <= 1.0)) {
        throw ConfigError(fmt::format("scenario: expert {} agree_prob must be in [0, 1]", e));
      }
    }
  }
}

std::size_t behavior_index(const ScenarioSpec& spec, std::size_t e, std::uint64_t t) {
  const auto rotations = static_cast<std::size_t>(
      std::upper_bound(spec.change_points.begin(), spec.change_points.end(), t) -
      spec.change_points.begin());
  return (e + spec.m - rotations % spec.m) % spec.m;
}

StreamStep generate_step(const ScenarioSpec& spec, std::uint64_t t) {
  if (t < 1 || t > spec.horizon) {
    throw ContractError(fmt::format("step {} outside [1, {}]", t, spec.horizon));
  }
  StreamStep step;
  step.step = t;
  step.predictions.reserve(spec.m);
  SplitMix64 target_rng(spec.seed, t, kTargetStream);
  if (spec.mode == TaskMode::kClassification) {
    const std::size_t truth = target_rng.bounded(spec.d);
    step.target = one_hot(spec.d, truth);
    for (std::size_t e = 0; e < spec.m; ++e) {
      step.predictions.push_back(classification_prediction(
          spec, spec.experts[behavior_index(spec, e, t)], truth, t, e));
    }
  } else {
    auto y = clean_signal(spec, t);
    for (double& v : y) v += kTargetNoise * target_rng.normal();
    step.target = PredictionVector(std::move(y));
    for (std::size_t e = 0; e < spec.m; ++e) {
      step.predictions.push_back(regression_prediction(
          spec, spec.experts[behavior_index(spec, e, t)], step.target, t, e));
    }
  }
  return step;
}

StreamSource scenario_source(const ScenarioSpec& spec) {
  spec.validate();
  auto next = std::make_shared<std::uint64_t>(1);
  return [spec, next]() -> std::optional<StreamStep> {
    if (*next > spec.horizon) return std::nullopt;
    return generate_step(spec, (*next)++);
  };
}

Trace run_scenario(const ScenarioSpec& spec, const AggregatorSpec& aggregator,
                   const LossKind& loss) {
  spec.validate();
  auto session = make_aggregator(aggregator, spec.m, spec.mode, loss);
  return run_stream(*session, scenario_source(spec), spec.delay);
}

}  // namespace earcp
