#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rankaudit/dataset.hpp"

namespace rankaudit {

enum class RankingSource { kExplicitRankColumn, kScoreDerived };
enum class ScoreDirection { kHigherBetter, kLowerBetter };

// A total order over the rows of a dataset. Positions are 1-indexed; position
// 1 is the best-ranked row.
class Ranking {
 public:
  Ranking(std::vector<RowIndex> order, RankingSource source);

  // ranks[r] is the 1-indexed position of row r; must be a permutation of 1..n.
  static Ranking from_rank_column(const Dataset& data, std::span<const std::int64_t> ranks);

  // Lexicographic comparison of direction-adjusted score vectors, ties broken
  // by ascending row index.
  static Ranking from_scores(const Dataset& data, const std::vector<std::vector<double>>& scores,
                             const std::vector<ScoreDirection>& directions);

  std::size_t size() const noexcept { return order_.size(); }
  RankingSource source() const noexcept { return source_; }
  const std::vector<RowIndex>& order() const noexcept { return order_; }

  // Row at 1-indexed position k.
  RowIndex at(std::size_t k) const { return order_.at(k - 1); }
  std::span<const RowIndex> prefix(std::size_t k) const;
  // 1-indexed position of a row.
  std::size_t position_of(RowIndex row) const { return positions_.at(row); }

  friend bool operator==(const Ranking& a, const Ranking& b) { return a.order_ == b.order_; }

 private:
  std::vector<RowIndex> order_;
  std::vector<std::size_t> positions_;
  RankingSource source_;
};

}  // namespace rankaudit
