#pragma once

#include <algorithm>
#include <numeric>

#include "rankaudit/generators.hpp"
#include "rankaudit/random.hpp"
#include "rankaudit/ranking.hpp"
#include "rankaudit/shapley.hpp"

namespace rankaudit::testing {

// phi_i = w_{i, t_i} - sum_c w_{i, c} * freq_background(c), the Shapley value
// of an additive model under the interventional value function.
inline std::vector<double> linear_closed_form(const SurrogateModel& model, std::span<const Code> row,
                                              const Background& background) {
  std::vector<double> phi(row.size(), 0.0);
  for (AttrIndex a = 0; a < row.size(); ++a) {
    double expected = 0.0;
    for (std::size_t b = 0; b < background.rows.size(); ++b) {
      expected += background.weights[b] * model.weight(a, background.rows[b][a]);
    }
    phi[a] = model.weight(a, row[a]) - expected;
  }
  return phi;
}

// Random categorical rows ranked by attribute `driver` (code 0 first), ties
// broken by a seeded shuffle.
struct DrivenInstance {
  Dataset data;
  Ranking ranking;
};

inline DrivenInstance ranked_by_attribute(std::uint64_t seed, std::size_t n_rows,
                                          const std::vector<std::size_t>& cards, AttrIndex driver) {
  Dataset data = random_dataset(seed, n_rows, cards);
  std::vector<RowIndex> order(n_rows);
  std::iota(order.begin(), order.end(), RowIndex{0});
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  shuffle(std::span<RowIndex>(order), rng);
  std::stable_sort(order.begin(), order.end(),
                   [&](RowIndex a, RowIndex b) { return data.at(a, driver) < data.at(b, driver); });
  Ranking ranking(std::move(order), RankingSource::kScoreDerived);
  return {std::move(data), std::move(ranking)};
}

// Seeded explanation instance: 4-10 attributes of cardinality 2-4, 300 rows,
// ranked either at random or by a noisy score with an interaction term.
struct ShapleyCase {
  Dataset data;
  Ranking ranking;
};

inline ShapleyCase shapley_case(std::uint64_t seed, bool score_driven) {
  std::mt19937_64 rng(seed);
  const std::size_t m = 4 + uniform_below(rng, 7);
  std::vector<std::size_t> cards;
  for (std::size_t i = 0; i < m; ++i) cards.push_back(2 + uniform_below(rng, 3));
  Dataset data = random_dataset(seed * 3 + 1, 300, cards);
  if (!score_driven) {
    Ranking ranking = random_ranking(seed * 3 + 2, data);
    return {std::move(data), std::move(ranking)};
  }
  std::vector<std::vector<double>> scores;
  for (RowIndex r = 0; r < data.n_rows(); ++r) {
    const double x0 = data.at(r, 0);
    scores.push_back({3.0 * x0 + 2.0 * data.at(r, 1) + x0 * data.at(r, 2) + 2.0 * uniform_unit(rng)});
  }
  Ranking ranking = Ranking::from_scores(data, scores, {ScoreDirection::kHigherBetter});
  return {std::move(data), std::move(ranking)};
}

}  // namespace rankaudit::testing
