#include "rankaudit/shapley.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <unordered_map>

#include "rankaudit/error.hpp"
#include "rankaudit/random.hpp"

namespace rankaudit {

Background make_background(const Dataset& data, std::size_t max_rows, std::uint64_t seed) {
  if (data.n_rows() == 0) throw Error(ErrorCode::kParameter, "background needs at least one row");
  if (max_rows == 0) throw Error(ErrorCode::kParameter, "background size must be positive");
  std::vector<RowIndex> picked(data.n_rows());
  std::iota(picked.begin(), picked.end(), RowIndex{0});
  Background bg;
  bg.seed = seed;
  if (picked.size() > max_rows) {
    std::mt19937_64 rng(seed);
    shuffle(std::span<RowIndex>(picked), rng);
    picked.resize(max_rows);
    std::sort(picked.begin(), picked.end());
    bg.sampled = true;
  }
  bg.sample_size = picked.size();

  std::map<std::vector<Code>, std::size_t> counts;
  for (RowIndex r : picked) ++counts[std::vector<Code>(data.row(r).begin(), data.row(r).end())];
  for (auto& [row, count] : counts) {
    bg.rows.push_back(row);
    bg.weights.push_back(static_cast<double>(count) / static_cast<double>(bg.sample_size));
  }
  return bg;
}

namespace {

class ValueFunction {
 public:
  ValueFunction(const SurrogateModel& model, std::span<const Code> row, const Background& background)
      : model_(model), row_(row), background_(background), mixed_(row.size()) {}

  // Attributes whose bit is set in mask come from the explained row.
  double operator()(std::uint64_t mask) {
    double total = 0.0;
    for (std::size_t b = 0; b < background_.rows.size(); ++b) {
      const auto& bg = background_.rows[b];
      for (std::size_t a = 0; a < row_.size(); ++a) mixed_[a] = (mask >> a) & 1 ? row_[a] : bg[a];
      total += background_.weights[b] * model_.predict(mixed_);
    }
    return total;
  }

 private:
  const SurrogateModel& model_;
  std::span<const Code> row_;
  const Background& background_;
  std::vector<Code> mixed_;
};

std::vector<double> exact(ValueFunction& v, std::size_t m) {
  if (m > kMaxExactAttributes) {
    throw Error(ErrorCode::kModeUnsupported, "exact Shapley values support at most " +
                                                 std::to_string(kMaxExactAttributes) + " attributes, got " +
                                                 std::to_string(m));
  }
  const std::uint64_t subsets = std::uint64_t{1} << m;
  std::vector<double> value(subsets);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) value[mask] = v(mask);

  // weight[s] = s! (m - s - 1)! / m!
  std::vector<double> weight(m);
  for (std::size_t s = 0; s < m; ++s) {
    double w = 1.0 / static_cast<double>(m);
    for (std::size_t i = 1; i <= s; ++i) w *= static_cast<double>(i) / static_cast<double>(m - i);
    weight[s] = w;
  }
  std::vector<double> phi(m, 0.0);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    const auto s = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t i = 0; i < m; ++i) {
      if ((mask >> i) & 1) continue;
      phi[i] += weight[s] * (value[mask | (std::uint64_t{1} << i)] - value[mask]);
    }
  }
  return phi;
}

std::vector<double> monte_carlo(ValueFunction& v, std::size_t m, std::size_t permutations, std::mt19937_64 rng) {
  if (m > 63) throw Error(ErrorCode::kModeUnsupported, "Monte Carlo Shapley values support at most 63 attributes");
  if (permutations == 0) throw Error(ErrorCode::kParameter, "Monte Carlo needs at least one permutation");
  std::unordered_map<std::uint64_t, double> memo;
  auto value = [&](std::uint64_t mask) {
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    const double out = v(mask);
    memo.emplace(mask, out);
    return out;
  };

  std::vector<double> phi(m, 0.0);
  auto walk = [&](const std::vector<std::size_t>& order) {
    std::uint64_t mask = 0;
    double previous = value(0);
    for (std::size_t i : order) {
      mask |= std::uint64_t{1} << i;
      const double current = value(mask);
      phi[i] += current - previous;
      previous = current;
    }
  };
  // Each drawn permutation is walked in all m cyclic rotations, forwards and
  // backwards, so every attribute is sampled at every coalition size.
  std::vector<std::size_t> base(m);
  std::iota(base.begin(), base.end(), std::size_t{0});
  std::vector<std::size_t> order(m);
  std::size_t walked = 0;
  while (walked < permutations) {
    shuffle(std::span<std::size_t>(base), rng);
    for (std::size_t shift = 0; shift < m && walked < permutations; ++shift) {
      std::rotate_copy(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(shift), base.end(), order.begin());
      walk(order);
      if (++walked == permutations) break;
      std::reverse(order.begin(), order.end());
      walk(order);
      ++walked;
    }
  }
  for (double& x : phi) x /= static_cast<double>(permutations);
  return phi;
}

}  // namespace

double background_mean(const SurrogateModel& model, const Background& background) {
  double total = 0.0;
  for (std::size_t b = 0; b < background.rows.size(); ++b) total += background.weights[b] * model.predict(background.rows[b]);
  return total;
}

std::vector<double> shapley_values(const SurrogateModel& model, std::span<const Code> row,
                                   const Background& background, const ShapleyConfig& config, std::uint64_t stream) {
  if (background.rows.empty()) throw Error(ErrorCode::kParameter, "background is empty");
  const std::size_t m = row.size();
  if (m == 0) return {};
  if (background.rows.front().size() != m) throw Error(ErrorCode::kSchemaMismatch, "background width differs from the row");
  ValueFunction v(model, row, background);
  if (config.mode == ShapleyMode::kExact) return exact(v, m);
  return monte_carlo(v, m, config.permutations, derived_stream(config.seed, stream));
}

}  // namespace rankaudit
