#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rankaudit/surrogate.hpp"

namespace rankaudit {

inline constexpr std::size_t kMaxExactAttributes = 12;
inline constexpr std::size_t kDefaultBackgroundRows = 512;

// Background rows for the interventional value function, collapsed to
// distinct rows with multiplicities.
struct Background {
  std::vector<std::vector<Code>> rows;
  std::vector<double> weights;  // multiplicity / sample size
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  bool sampled = false;  // false when every dataset row is used
};

// The full dataset when it has at most max_rows rows, otherwise a seeded
// uniform sample of max_rows rows without replacement.
Background make_background(const Dataset& data, std::size_t max_rows = kDefaultBackgroundRows,
                           std::uint64_t seed = 0);

enum class ShapleyMode { kExact, kMonteCarlo };

struct ShapleyConfig {
  ShapleyMode mode = ShapleyMode::kExact;
  std::size_t permutations = 200;  // Monte Carlo walks (rotations and reversals of seeded draws)
  std::uint64_t seed = 0;
};

// Per-attribute interventional Shapley values of model(row):
// v(S) = sum_b w_b * model(row on S, b elsewhere). Monte Carlo permutations
// are drawn from derived_stream(config.seed, stream), so results do not
// depend on the order in which rows are explained.
std::vector<double> shapley_values(const SurrogateModel& model, std::span<const Code> row,
                                   const Background& background, const ShapleyConfig& config,
                                   std::uint64_t stream = 0);

// Weighted mean prediction over the background, v of the empty set.
double background_mean(const SurrogateModel& model, const Background& background);

}  // namespace rankaudit
