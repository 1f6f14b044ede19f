#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "rankaudit/search.hpp"

namespace rankaudit {

// Smallest k at which a frozen count falls below alpha * size * k / n:
// floor(count * n / (alpha * size)) + 1, in exact integer arithmetic.
std::int64_t k_tilde(std::int64_t current_count, std::int64_t size, Fraction alpha, std::size_t n);

// Scheduled future violation checkpoints, keyed by pattern.
class KSchedule {
 public:
  struct Entry {
    std::int64_t k_tilde;
    std::int64_t count_at_insert;
  };

  void insert(const Pattern& p, Entry entry);
  bool erase(const Pattern& p);
  bool contains(const Pattern& p) const { return entries_.count(p.key()) > 0; }
  const Entry* find(const Pattern& p) const;
  std::size_t size() const noexcept { return entries_.size(); }

  // Patterns whose checkpoint is exactly k, in canonical order.
  std::vector<Pattern> due_at(std::int64_t k) const;
  // All entries in (k-tilde, canonical key) order.
  std::vector<std::pair<Pattern, Entry>> entries() const;

 private:
  std::map<std::string, Entry> entries_;
  std::set<std::pair<std::int64_t, std::string>> by_k_;
};

// Incremental detection over the k range under proportional bounds.
//
// The engine keeps the realized search tree of the current k: every reached
// pattern above the size threshold is either expanded (non-violating, with a
// k-tilde) or violating (in result or dres). A step to k+1 only touches the
// part of the tree matched by the new row, the scheduled checkpoints due at
// k+1, and dres.
class PropBoundsEngine {
 public:
  PropBoundsEngine(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec);

  void start();
  // k -> k+1: selective_td() followed by the due checkpoints and dres.
  void advance();

  std::size_t k() const noexcept { return k_; }
  const SearchOutcome& state() const noexcept { return state_; }
  const KSchedule& schedule() const noexcept { return schedule_; }
  // Tree nodes re-examined by the last selective descent, in visit order.
  const std::vector<Pattern>& last_selective_visits() const noexcept { return visits_; }
  std::size_t tree_size() const noexcept { return tree_.size(); }

  ResultSet run();

  // Exposed for step-level tests: the two halves of advance().
  void selective_td(std::size_t k);
  void fire_and_revisit(std::size_t k);

 private:
  struct Node {
    Pattern pattern;
    bool violating = false;
    std::int64_t k_tilde = kNoSchedule;
    std::int64_t ancestor_min = kNoSchedule;  // min k-tilde over strict tree ancestors
    std::int64_t count = 0;                   // top-k count when k_tilde was computed
  };
  class TreeObserver;

  void expand_from(const Pattern& p, std::int64_t down);
  void set_expanded(Node& node, std::int64_t count, std::int64_t size, std::int64_t ancestor_min);
  void reschedule(const Node& node, std::int64_t count);
  void revalidate(const Pattern& p, std::int64_t ancestor_min);
  void collapse_below(const Pattern& p);
  void remove_from_result(const Pattern& b);
  void mark_violating(Node& node);

  const Dataset& data_;
  const BoundsSpec& spec_;
  CountCache cache_;
  BoundTest test_;
  SearchOutcome state_;
  KSchedule schedule_;
  std::unordered_map<std::string, Node> tree_;
  std::vector<Pattern> visits_;
  std::size_t k_ = 0;
};

ResultSet prop_bounds(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec);

}  // namespace rankaudit
