#include "rankaudit/lattice.hpp"

#include "rankaudit/error.hpp"
#include "rankaudit/result.hpp"

namespace rankaudit {

std::vector<Pattern> generate_children(const Pattern& p, const Schema& schema) {
  std::vector<Pattern> children;
  const AttrIndex first = p.empty() ? 0 : p.max_attr() + 1;
  for (AttrIndex a = first; a < schema.size(); ++a) {
    for (Code c = 0; c < schema.domain_size(a); ++c) children.push_back(p.with({a, c}));
  }
  return children;
}

CountCache::CountCache(const Dataset& data, const Ranking& ranking) : data_(&data), ranking_(&ranking) {
  if (ranking.size() != data.n_rows()) {
    throw Error(ErrorCode::kMalformedRanking, "ranking covers " + std::to_string(ranking.size()) +
                                                  " rows but the dataset has " + std::to_string(data.n_rows()));
  }
}

std::int64_t CountCache::pattern_size(const Pattern& p) {
  Record& rec = record(p);
  if (rec.size_in_data < 0) {
    std::int64_t count = 0;
    for (RowIndex r = 0; r < data_->n_rows(); ++r) count += matches(data_->row(r), p) ? 1 : 0;
    rec.size_in_data = count;
  }
  return rec.size_in_data;
}

std::int64_t CountCache::topk_count(const Pattern& p, std::size_t k) {
  if (k < 1 || k > data_->n_rows()) {
    throw Error(ErrorCode::kRangeError, "k=" + std::to_string(k) + " outside 1.." + std::to_string(data_->n_rows()));
  }
  Record& rec = record(p);
  if (rec.counted_up_to_k > k) {
    rec.topk_count = 0;
    rec.counted_up_to_k = 0;
  }
  for (std::size_t pos = rec.counted_up_to_k + 1; pos <= k; ++pos) {
    rec.topk_count += matches(data_->row(ranking_->at(pos)), p) ? 1 : 0;
  }
  rec.counted_up_to_k = k;
  return rec.topk_count;
}

std::vector<Pattern> CountCache::advance_k(std::size_t k, const std::vector<Pattern>& tracked) {
  if (k < 1 || k > data_->n_rows()) {
    throw Error(ErrorCode::kRangeError, "k=" + std::to_string(k) + " outside 1.." + std::to_string(data_->n_rows()));
  }
  for (const auto& p : tracked) {
    auto it = records_.find(p.key());
    const std::size_t at = it == records_.end() ? 0 : it->second.counted_up_to_k;
    if (at + 1 != k) {
      throw Error(ErrorCode::kCacheCoherence, "pattern counted up to " + std::to_string(at) +
                                                  ", cannot advance to k=" + std::to_string(k));
    }
  }
  const auto row = data_->row(ranking_->at(k));
  std::vector<Pattern> affected;
  for (const auto& p : tracked) {
    Record& rec = record(p);
    rec.counted_up_to_k = k;
    if (matches(row, p)) {
      ++rec.topk_count;
      affected.push_back(p);
    }
  }
  return affected;
}

const CountCache::Record* CountCache::find(const Pattern& p) const {
  auto it = records_.find(p.key());
  return it == records_.end() ? nullptr : &it->second;
}

bool GeneratedNodeLog::has_duplicates() const {
  std::unordered_set<std::string> seen;
  for (const auto& p : nodes_) {
    if (!seen.insert(p.key()).second) return true;
  }
  return false;
}

std::size_t ResultSet::total_evaluated() const {
  std::size_t total = 0;
  for (const auto& [k, s] : stats) total += s.evaluated;
  return total;
}

std::size_t ResultSet::total_generated() const {
  std::size_t total = 0;
  for (const auto& [k, s] : stats) total += s.generated;
  return total;
}

bool same_patterns(const ResultSet& a, const ResultSet& b) { return a.per_k == b.per_k; }

bool is_antichain(const PatternSet& set) {
  for (const auto& [key, p] : set) {
    for (const auto& [other_key, q] : set) {
      if (properly_contains(p, q)) return false;
    }
  }
  return true;
}

}  // namespace rankaudit
