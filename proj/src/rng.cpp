#include "earcp/rng.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>
#include <utility>

namespace earcp {

double SplitMix64::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

// Small prefixes keep their displaced entries in a flat list; larger ones
// switch to a hash map. Both give the same permutation.
constexpr std::size_t kFlatSwapLimit = 32;

template <typename Lookup, typename Store>
void fisher_yates_prefix(SplitMix64& rng, std::size_t n, std::size_t k, std::size_t self,
                         std::vector<std::size_t>& out, Lookup lookup, Store store) {
  out.clear();
  out.reserve(k);
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t j = r + static_cast<std::size_t>(rng.bounded(n - r));
    const std::size_t at_j = lookup(j);
    const std::size_t at_r = lookup(r);
    store(j, at_r);
    store(r, at_j);
    out.push_back(at_j < self ? at_j : at_j + 1);
  }
}

}  // namespace

void sample_peers(SplitMix64& rng, std::size_t m, std::size_t self, std::size_t k,
                  std::vector<std::size_t>& out) {
  const std::size_t n = m - 1;
  if (k <= kFlatSwapLimit) {
    std::vector<std::pair<std::size_t, std::size_t>> moved;
    moved.reserve(2 * k);
    auto lookup = [&](std::size_t pos) {
      for (const auto& [p, v] : moved) {
        if (p == pos) return v;
      }
      return pos;
    };
    auto store = [&](std::size_t pos, std::size_t value) {
      for (auto& [p, v] : moved) {
        if (p == pos) {
          v = value;
          return;
        }
      }
      moved.emplace_back(pos, value);
    };
    fisher_yates_prefix(rng, n, k, self, out, lookup, store);
    return;
  }
  std::unordered_map<std::size_t, std::size_t> moved;
  moved.reserve(2 * k);
  auto lookup = [&](std::size_t pos) {
    auto it = moved.find(pos);
    return it == moved.end() ? pos : it->second;
  };
  auto store = [&](std::size_t pos, std::size_t value) { moved[pos] = value; };
  fisher_yates_prefix(rng, n, k, self, out, lookup, store);
}

}  // namespace earcp
