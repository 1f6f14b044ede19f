#include "rankaudit/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rankaudit/error.hpp"

namespace rankaudit {

Ranking::Ranking(std::vector<RowIndex> order, RankingSource source)
    : order_(std::move(order)), positions_(order_.size(), 0), source_(source) {
  for (std::size_t i = 0; i < order_.size(); ++i) {
    const RowIndex r = order_[i];
    if (r >= order_.size() || positions_[r] != 0) {
      throw Error(ErrorCode::kMalformedRanking, "order is not a permutation of the row indices");
    }
    positions_[r] = i + 1;
  }
}

Ranking Ranking::from_rank_column(const Dataset& data, std::span<const std::int64_t> ranks) {
  const std::size_t n = data.n_rows();
  if (ranks.size() != n) {
    throw Error(ErrorCode::kMalformedRanking,
                "expected " + std::to_string(n) + " rank values, got " + std::to_string(ranks.size()));
  }
  std::vector<RowIndex> order(n, 0);
  std::vector<bool> seen(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    const std::int64_t rank = ranks[r];
    if (rank < 1 || rank > static_cast<std::int64_t>(n)) {
      throw Error(ErrorCode::kMalformedRanking, "rank " + std::to_string(rank) + " of row " + std::to_string(r) +
                                                    " is outside 1.." + std::to_string(n));
    }
    if (seen[rank - 1]) {
      throw Error(ErrorCode::kMalformedRanking, "rank " + std::to_string(rank) + " appears twice");
    }
    seen[rank - 1] = true;
    order[rank - 1] = static_cast<RowIndex>(r);
  }
  return Ranking(std::move(order), RankingSource::kExplicitRankColumn);
}

Ranking Ranking::from_scores(const Dataset& data, const std::vector<std::vector<double>>& scores,
                             const std::vector<ScoreDirection>& directions) {
  const std::size_t n = data.n_rows();
  if (scores.size() != n) {
    throw Error(ErrorCode::kInvalidScore,
                "expected " + std::to_string(n) + " score vectors, got " + std::to_string(scores.size()));
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (scores[r].size() != directions.size()) {
      throw Error(ErrorCode::kInvalidScore, "score vector of row " + std::to_string(r) + " has the wrong length");
    }
    for (double s : scores[r]) {
      if (std::isnan(s)) throw Error(ErrorCode::kInvalidScore, "row " + std::to_string(r) + " has a NaN score");
    }
  }
  std::vector<RowIndex> order(n);
  std::iota(order.begin(), order.end(), RowIndex{0});
  // better(a, b): a is ranked before b
  auto better = [&](RowIndex a, RowIndex b) {
    for (std::size_t j = 0; j < directions.size(); ++j) {
      const double x = scores[a][j];
      const double y = scores[b][j];
      if (x == y) continue;
      return directions[j] == ScoreDirection::kHigherBetter ? x > y : x < y;
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), better);
  return Ranking(std::move(order), RankingSource::kScoreDerived);
}

std::span<const RowIndex> Ranking::prefix(std::size_t k) const {
  if (k > order_.size()) {
    throw Error(ErrorCode::kRangeError,
                "prefix length " + std::to_string(k) + " exceeds " + std::to_string(order_.size()) + " rows");
  }
  return {order_.data(), k};
}

}  // namespace rankaudit
