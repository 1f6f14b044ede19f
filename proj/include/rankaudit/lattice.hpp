#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rankaudit/dataset.hpp"
#include "rankaudit/pattern.hpp"
#include "rankaudit/ranking.hpp"

namespace rankaudit {

// Search-tree children: p extended by one assignment on an attribute whose
// index exceeds every attribute of p, ordered by attribute then domain order.
std::vector<Pattern> generate_children(const Pattern& p, const Schema& schema);

// Memoized pattern sizes and top-k counts for one dataset/ranking pair.
class CountCache {
 public:
  struct Record {
    std::int64_t size_in_data = -1;  // -1 until scanned
    std::int64_t topk_count = 0;
    std::size_t counted_up_to_k = 0;  // topk_count covers positions 1..counted_up_to_k
  };

  CountCache(const Dataset& data, const Ranking& ranking);

  const Dataset& data() const { return *data_; }
  const Ranking& ranking() const { return *ranking_; }

  std::int64_t pattern_size(const Pattern& p);

  // Catches up forward from the cached position (O(1) when it is k-1);
  // recounts the prefix when k moved backwards.
  std::int64_t topk_count(const Pattern& p, std::size_t k);

  // Admits position k for every tracked pattern, all of which must be counted
  // up to k-1. Returns the tracked patterns matched by the row at position k.
  std::vector<Pattern> advance_k(std::size_t k, const std::vector<Pattern>& tracked);

  const Record* find(const Pattern& p) const;
  std::size_t size() const { return records_.size(); }

 private:
  Record& record(const Pattern& p) { return records_[p.key()]; }

  const Dataset* data_;
  const Ranking* ranking_;
  std::unordered_map<std::string, Record> records_;
};

// Append-only log of the patterns produced by children expansion in a run.
class GeneratedNodeLog {
 public:
  void record(const std::vector<Pattern>& children) { nodes_.insert(nodes_.end(), children.begin(), children.end()); }
  const std::vector<Pattern>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  void clear() { nodes_.clear(); }
  bool has_duplicates() const;

 private:
  std::vector<Pattern> nodes_;
};

}  // namespace rankaudit
