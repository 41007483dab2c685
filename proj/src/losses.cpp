#include "earcp/losses.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "earcp/errors.hpp"

namespace earcp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_inputs(const PredictionVector& p, const PredictionVector& y) {
  if (p.size() != y.size() || p.empty()) {
    throw StructuralError(fmt::format("loss: prediction length {} vs target length {}",
                                      p.size(), y.size()));
  }
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!std::isfinite(p[j]) || !std::isfinite(y[j])) {
      throw ContractError("loss: non-finite input");
    }
  }
}

}  // namespace

void validate(const LossKind& kind) {
  std::visit(Overloaded{
                 [](const ScaledSquaredError& k) {
                   if (!(k.bound > 0.0) || !std::isfinite(k.bound)) {
                     throw ConfigError(fmt::format("loss bound must be > 0, got {}", k.bound));
                   }
                 },
                 [](const ZeroOneArgmax&) {},
                 [](const ClippedCrossEntropy& k) {
                   if (!(k.clip > 0.0 && k.clip < 1.0)) {
                     throw ConfigError(fmt::format("loss clip must be in (0, 1), got {}", k.clip));
                   }
                 },
             },
             kind);
}

std::string_view loss_key(const LossKind& kind) {
  return std::visit(Overloaded{
                        [](const ScaledSquaredError&) { return std::string_view("sq"); },
                        [](const ZeroOneArgmax&) { return std::string_view("zero_one"); },
                        [](const ClippedCrossEntropy&) { return std::string_view("xent"); },
                    },
                    kind);
}

LossKind loss_from_key(std::string_view key, double parameter) {
  LossKind kind;
  if (key == "sq") {
    kind = ScaledSquaredError{parameter};
  } else if (key == "zero_one") {
    kind = ZeroOneArgmax{};
  } else if (key == "xent") {
    kind = ClippedCrossEntropy{parameter};
  } else {
    throw ConfigError(fmt::format("unknown loss '{}' (expected sq, zero_one or xent)", key));
  }
  validate(kind);
  return kind;
}

bool is_convex(const LossKind& kind) { return !std::holds_alternative<ZeroOneArgmax>(kind); }

double evaluate_loss(const LossKind& kind, const PredictionVector& prediction,
                     const PredictionVector& target) {
  check_inputs(prediction, target);
  return std::visit(
      Overloaded{
          [&](const ScaledSquaredError& k) {
            double sq = 0.0;
            for (std::size_t j = 0; j < prediction.size(); ++j) {
              const double diff = prediction[j] - target[j];
              sq += diff * diff;
            }
            return std::min(1.0, sq / (k.bound * k.bound));
          },
          [&](const ZeroOneArgmax&) {
            return argmax(prediction.values()) == argmax(target.values()) ? 0.0 : 1.0;
          },
          [&](const ClippedCrossEntropy& k) {
            const double p = prediction[argmax(target.values())];
            const double loss = -std::log(std::max(k.clip, p)) / -std::log(k.clip);
            return std::clamp(loss, 0.0, 1.0);
          },
      },
      kind);
}

}  // namespace earcp
