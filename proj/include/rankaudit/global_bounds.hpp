#pragma once

#include "rankaudit/search.hpp"

namespace rankaudit {

// Incremental detection over the k range under global bounds. Whenever
// L_k == L_{k-1} only the patterns whose counts the newly admitted row can
// change are revisited; a rising bound triggers a fresh top-down search.
class GlobalBoundsEngine {
 public:
  GlobalBoundsEngine(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec);

  // Full top-down search at k_min.
  void start();
  // Moves from k to k+1.
  void advance();
  // First half of an incremental step (requires L_{k+1} == L_k): admits the
  // row at k+1 into the tracked counts and returns the patterns to revisit,
  // the result members it matches followed by all of dres.
  std::vector<Pattern> admit_next();
  // Re-evaluates b (a member of result or dres) at the current k and resumes
  // the top-down search below it when it no longer violates.
  void search_from_node(const Pattern& b);

  std::size_t k() const noexcept { return k_; }
  const SearchOutcome& state() const noexcept { return state_; }
  const CountCache& cache() const noexcept { return cache_; }
  // Patterns re-evaluated by the last incremental step (0 after a fresh search).
  std::size_t last_reevaluated() const noexcept { return last_reevaluated_; }
  bool last_step_was_fresh() const noexcept { return last_step_fresh_; }

  ResultSet run();

 private:
  void remove_from_result(const Pattern& b);

  const Dataset& data_;
  const BoundsSpec& spec_;
  CountCache cache_;
  BoundTest test_;
  SearchOutcome state_;
  std::size_t k_ = 0;
  std::size_t last_reevaluated_ = 0;
  bool last_step_fresh_ = true;
};

ResultSet global_bounds(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec);

}  // namespace rankaudit
