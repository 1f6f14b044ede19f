#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rankaudit/io/csv.hpp"
#include "rankaudit/ranking.hpp"

namespace rankaudit::io {

inline constexpr std::size_t kDefaultBins = 4;

struct ScoreColumn {
  std::string name;
  ScoreDirection direction = ScoreDirection::kHigherBetter;
};

// How CSV columns become attributes. Columns not named anywhere are
// categorical, in file order.
struct IngestConfig {
  std::vector<std::string> categorical;  // must exist
  std::vector<std::string> numeric;      // equal-width bucketized
  std::size_t bins = kDefaultBins;
  std::optional<std::string> rank_column;
  std::vector<ScoreColumn> score_columns;  // lexicographic, first is primary
  std::vector<std::string> ignore;
  bool require_ranking = false;
};

struct Ingested {
  Dataset data;
  std::optional<Ranking> ranking;
  std::vector<std::string> warnings;
};

// bins + 1 equally spaced edges from lo to hi.
std::vector<double> bin_edges(double lo, double hi, std::size_t bins);

// "[lo,hi)" or, for the last bin, "[lo,hi]", with shortest round-trip numbers.
std::string bin_label(double lo, double hi, bool last);

Ingested ingest_table(const CsvTable& table, const IngestConfig& config);
Ingested ingest_csv(const std::string& path, const IngestConfig& config);

// The dataset's labels plus, when given, a 1-indexed "Rank" column.
CsvTable to_table(const Dataset& data, const Ranking* ranking = nullptr);

}  // namespace rankaudit::io
