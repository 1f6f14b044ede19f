#include "rankaudit/io/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "rankaudit/error.hpp"

namespace rankaudit::io {

namespace {

std::string number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, const std::string& column, std::size_t row) {
  const std::string s = trim(cell);
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(x)) {
    throw Error(ErrorCode::kNonNumeric,
                "column '" + column + "' row " + std::to_string(row + 1) + ": '" + cell + "' is not a number");
  }
  return x;
}

std::size_t require_column(const CsvTable& table, const std::string& name) {
  const long c = table.column(name);
  if (c < 0) throw Error(ErrorCode::kMissingColumn, "no column named '" + name + "'");
  return static_cast<std::size_t>(c);
}

struct Column {
  std::size_t source;
  bool numeric;
};

// Equal-width buckets over the observed range; empty buckets are dropped
// from the domain, which keeps bucket order.
Attribute bucketize(const CsvTable& table, std::size_t col, std::size_t bins, std::vector<Code>& out,
                    std::vector<std::string>& warnings) {
  const std::string& name = table.header[col];
  std::vector<double> values;
  values.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) values.push_back(parse_number(table.rows[r][col], name, r));
  Attribute attr{name, {}};
  out.assign(values.size(), 0);
  if (values.empty()) return attr;

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) {
    warnings.push_back("column '" + name + "' has a single value " + number(lo) + "; one bucket");
    attr.domain.push_back(bin_label(lo, hi, true));
    return attr;
  }
  const std::vector<double> edges = bin_edges(lo, hi, bins);
  std::vector<std::size_t> bucket(values.size());
  std::vector<bool> used(bins, false);
  for (std::size_t r = 0; r < values.size(); ++r) {
    // Last edge e with e <= x, clamped so that hi lands in the closed last bin.
    const auto it = std::upper_bound(edges.begin(), edges.end(), values[r]);
    const std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(it - edges.begin()) - 1, bins - 1);
    bucket[r] = b;
    used[b] = true;
  }
  std::vector<Code> code_of(bins, 0);
  for (std::size_t b = 0; b < bins; ++b) {
    if (!used[b]) continue;
    code_of[b] = static_cast<Code>(attr.domain.size());
    attr.domain.push_back(bin_label(edges[b], edges[b + 1], b + 1 == bins));
  }
  for (std::size_t r = 0; r < values.size(); ++r) out[r] = code_of[bucket[r]];
  return attr;
}

}  // namespace

std::vector<double> bin_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::kParameter, "bin count must be positive");
  std::vector<double> edges(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = lo + width * static_cast<double>(i);
  edges[bins] = hi;
  return edges;
}

std::string bin_label(double lo, double hi, bool last) {
  return "[" + number(lo) + "," + number(hi) + (last ? "]" : ")");
}

Ingested ingest_table(const CsvTable& table, const IngestConfig& config) {
  if (config.bins == 0) throw Error(ErrorCode::kParameter, "bin count must be positive");
  std::set<std::string> claimed;
  auto claim = [&](const std::string& name, const char* role) {
    require_column(table, name);
    if (!claimed.insert(name).second) {
      throw Error(ErrorCode::kParameter, "column '" + name + "' declared twice (as " + role + ")");
    }
  };
  for (const auto& c : config.categorical) claim(c, "categorical");
  for (const auto& c : config.numeric) claim(c, "numeric");
  if (config.rank_column) claim(*config.rank_column, "rank");
  for (const auto& s : config.score_columns) claim(s.name, "score");
  for (const auto& c : config.ignore) claim(c, "ignored");
  if (config.rank_column && !config.score_columns.empty()) {
    throw Error(ErrorCode::kParameter, "declare either a rank column or score columns, not both");
  }
  if (config.require_ranking && !config.rank_column && config.score_columns.empty()) {
    throw Error(ErrorCode::kNoRanking, "an audit needs a rank column or score columns");
  }

  const std::set<std::string> numeric(config.numeric.begin(), config.numeric.end());
  const std::set<std::string> categorical(config.categorical.begin(), config.categorical.end());
  std::vector<Column> columns;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const std::string& name = table.header[c];
    if (numeric.count(name)) {
      columns.push_back({c, true});
    } else if (categorical.count(name) || !claimed.count(name)) {
      columns.push_back({c, false});
    }
  }
  if (columns.empty()) throw Error(ErrorCode::kInvalidSchema, "no attribute columns left");

  std::vector<std::string> warnings;
  const std::size_t n = table.rows.size();
  std::vector<Attribute> attrs;
  std::vector<std::vector<Code>> per_column;
  for (const Column& col : columns) {
    std::vector<Code> codes(n);
    if (col.numeric) {
      attrs.push_back(bucketize(table, col.source, config.bins, codes, warnings));
    } else {
      Attribute attr{table.header[col.source], {}};
      std::map<std::string, Code> lookup;
      for (std::size_t r = 0; r < n; ++r) {
        const std::string& label = table.rows[r][col.source];
        auto [it, fresh] = lookup.emplace(label, static_cast<Code>(attr.domain.size()));
        if (fresh) attr.domain.push_back(label);
        codes[r] = it->second;
      }
      attrs.push_back(std::move(attr));
    }
    per_column.push_back(std::move(codes));
  }
  std::vector<Code> codes;
  codes.reserve(n * columns.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (const auto& col : per_column) codes.push_back(col[r]);
  }
  Ingested result{Dataset(Schema(std::move(attrs)), std::move(codes)), std::nullopt, std::move(warnings)};

  if (config.rank_column) {
    const std::size_t c = require_column(table, *config.rank_column);
    std::vector<std::int64_t> ranks;
    for (std::size_t r = 0; r < n; ++r) {
      const std::string s = trim(table.rows[r][c]);
      std::int64_t v = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::kNonNumeric, "rank column '" + *config.rank_column + "' row " + std::to_string(r + 1) +
                                                ": '" + table.rows[r][c] + "' is not an integer");
      }
      ranks.push_back(v);
    }
    result.ranking = Ranking::from_rank_column(result.data, ranks);
  } else if (!config.score_columns.empty()) {
    std::vector<std::vector<double>> scores(n);
    std::vector<ScoreDirection> directions;
    for (const auto& sc : config.score_columns) {
      const std::size_t c = require_column(table, sc.name);
      for (std::size_t r = 0; r < n; ++r) scores[r].push_back(parse_number(table.rows[r][c], sc.name, r));
      directions.push_back(sc.direction);
    }
    result.ranking = Ranking::from_scores(result.data, scores, directions);
  }
  return result;
}

Ingested ingest_csv(const std::string& path, const IngestConfig& config) {
  return ingest_table(read_csv(path), config);
}

CsvTable to_table(const Dataset& data, const Ranking* ranking) {
  CsvTable table;
  for (const auto& a : data.schema().attributes()) table.header.push_back(a.name);
  if (ranking) table.header.push_back("Rank");
  for (RowIndex r = 0; r < data.n_rows(); ++r) {
    std::vector<std::string> cells;
    for (AttrIndex a = 0; a < data.n_attributes(); ++a) cells.push_back(data.schema().attribute(a).domain[data.at(r, a)]);
    if (ranking) cells.push_back(std::to_string(ranking->position_of(r)));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace rankaudit::io
