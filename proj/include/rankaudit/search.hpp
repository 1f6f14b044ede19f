#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <string>

#include "rankaudit/bounds.hpp"
#include "rankaudit/lattice.hpp"
#include "rankaudit/result.hpp"

namespace rankaudit {

inline constexpr std::int64_t kNoSchedule = std::numeric_limits<std::int64_t>::max();

struct SearchOutcome {
  PatternSet result;  // most-general violators
  PatternSet dres;    // violators reached whose ancestor is already in result
  std::map<std::string, std::int64_t> k_schedule;  // proportional mode: pattern key -> k-tilde
  GeneratedNodeLog generated;
  std::size_t evaluated = 0;
};

// Routes a violating pattern: into dres when an ancestor is already in
// result, otherwise into result, demoting any of its descendants found there.
void update(PatternSet& result, PatternSet& dres, const Pattern& p);

// Hooks for engines that keep per-node state alongside the plain search.
class SearchObserver {
 public:
  virtual ~SearchObserver() = default;
  virtual void on_violating(const Pattern&, std::int64_t /*count*/, std::int64_t /*size*/) {}
  // Called for every non-violating node before its children are queued.
  // Returns the value handed down to the children as their ancestor_min.
  virtual std::int64_t on_expanded(const Pattern&, std::int64_t /*count*/, std::int64_t /*size*/,
                                   std::int64_t ancestor_min) {
    return ancestor_min;
  }
};

struct QueueItem {
  Pattern pattern;
  std::int64_t ancestor_min = kNoSchedule;
};

// Queues the children of p (logging them as generated).
void push_children(std::deque<QueueItem>& queue, const Pattern& p, std::int64_t ancestor_min, const Schema& schema,
                   SearchOutcome& outcome);

// The FIFO top-down loop: patterns below the size threshold are dropped,
// violators are routed through update, everything else is expanded.
void continue_search(std::deque<QueueItem>& queue, CountCache& cache, const BoundTest& test, std::size_t k,
                     SearchOutcome& outcome, SearchObserver* observer = nullptr);

SearchOutcome top_down_search(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec, std::size_t k);
SearchOutcome top_down_search(CountCache& cache, const BoundsSpec& spec, std::size_t k);

// Baseline: an independent top-down search for every k in the range.
ResultSet iter_td(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec);

}  // namespace rankaudit
