#include "rankaudit/generators.hpp"

#include <numeric>

#include "rankaudit/error.hpp"
#include "rankaudit/random.hpp"

namespace rankaudit {

namespace {

Dataset worst_case_data(std::size_t n) {
  std::vector<Attribute> attributes;
  for (std::size_t i = 1; i <= n; ++i) attributes.push_back({"A" + std::to_string(i), {"0", "1"}});
  std::vector<Code> codes((n + 1) * n, 0);
  for (std::size_t i = 0; i < n; ++i) codes[i * n + i] = 1;
  return Dataset(Schema(std::move(attributes)), std::move(codes));
}

}  // namespace

WorstCaseInstance worst_case(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::kParameter, "worst_case needs an even n >= 2");
  Dataset data = worst_case_data(n);
  std::vector<RowIndex> order(n + 1);
  std::iota(order.begin(), order.end(), RowIndex{0});
  Ranking ranking(std::move(order), RankingSource::kExplicitRankColumn);
  const auto bound = static_cast<std::int64_t>(n / 2 + 1);
  BoundsSpec global = BoundsSpec::global(2, n, n, {{n, bound}});
  const Fraction alpha = Fraction::make(static_cast<std::int64_t>(n + 3), static_cast<std::int64_t>(n + 4));
  BoundsSpec proportional = BoundsSpec::proportional(2, n, n, alpha);
  return {std::move(data), std::move(ranking), std::move(global), alpha, std::move(proportional)};
}

Dataset random_dataset(std::uint64_t seed, std::size_t n_rows, const std::vector<std::size_t>& cardinalities) {
  if (n_rows == 0 || cardinalities.empty()) {
    throw Error(ErrorCode::kParameter, "random_dataset needs at least one row and one attribute");
  }
  std::vector<Attribute> attributes;
  for (std::size_t a = 0; a < cardinalities.size(); ++a) {
    if (cardinalities[a] < 1) throw Error(ErrorCode::kParameter, "attribute cardinality must be positive");
    Attribute attr{"A" + std::to_string(a), {}};
    for (std::size_t c = 0; c < cardinalities[a]; ++c) attr.domain.push_back(std::to_string(c));
    attributes.push_back(std::move(attr));
  }
  std::mt19937_64 rng(seed);
  std::vector<Code> codes;
  codes.reserve(n_rows * cardinalities.size());
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t card : cardinalities) codes.push_back(static_cast<Code>(uniform_below(rng, card)));
  }
  return restrict_to_active_domains(Dataset(Schema(std::move(attributes)), std::move(codes)));
}

Ranking random_ranking(std::uint64_t seed, const Dataset& data) {
  std::vector<RowIndex> order(data.n_rows());
  std::iota(order.begin(), order.end(), RowIndex{0});
  std::mt19937_64 rng(seed);
  shuffle(std::span<RowIndex>(order), rng);
  return Ranking(std::move(order), RankingSource::kExplicitRankColumn);
}

}  // namespace rankaudit
