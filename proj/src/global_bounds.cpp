#include "rankaudit/global_bounds.hpp"

#include <algorithm>
#include <chrono>

#include "rankaudit/error.hpp"

namespace rankaudit {

GlobalBoundsEngine::GlobalBoundsEngine(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec)
    : data_(data), spec_(spec), cache_(data, ranking), test_(spec, data.n_rows()) {
  if (spec.mode != BoundMode::kGlobal) throw Error(ErrorCode::kWrongMode, "GlobalBounds needs a global bound spec");
  validate_bounds(spec, data);
}

void GlobalBoundsEngine::start() {
  k_ = spec_.k_min;
  state_ = top_down_search(cache_, spec_, k_);
  last_reevaluated_ = 0;
  last_step_fresh_ = true;
}

void GlobalBoundsEngine::advance() {
  if (k_ == 0) throw Error(ErrorCode::kParameter, "advance() before start()");
  if (k_ >= spec_.k_max) throw Error(ErrorCode::kRangeError, "already at k_max");
  const std::size_t next = k_ + 1;
  if (spec_.lower_bound(k_) < spec_.lower_bound(next)) {
    // The bound rose: the previous search tree says nothing about the new one.
    const std::size_t evaluated = state_.evaluated;
    GeneratedNodeLog log = std::move(state_.generated);
    k_ = next;
    state_ = top_down_search(cache_, spec_, k_);
    state_.evaluated += evaluated;
    log.record(state_.generated.nodes());
    state_.generated = std::move(log);
    last_reevaluated_ = 0;
    last_step_fresh_ = true;
    return;
  }

  const std::vector<Pattern> candidates = admit_next();
  for (const auto& b : candidates) {
    if (state_.result.contains(b) || state_.dres.contains(b)) search_from_node(b);
  }
}

std::vector<Pattern> GlobalBoundsEngine::admit_next() {
  if (k_ == 0) throw Error(ErrorCode::kParameter, "admit_next() before start()");
  if (k_ >= spec_.k_max) throw Error(ErrorCode::kRangeError, "already at k_max");
  const std::size_t next = k_ + 1;
  if (spec_.lower_bound(k_) != spec_.lower_bound(next)) {
    throw Error(ErrorCode::kParameter, "admit_next() needs L_k == L_{k+1}");
  }
  std::vector<Pattern> tracked = state_.result.to_vector();
  for (const auto& [key, p] : state_.dres) tracked.push_back(p);
  const auto affected = cache_.advance_k(next, tracked);
  k_ = next;

  std::vector<Pattern> candidates;
  for (const auto& p : affected) {
    if (state_.result.contains(p)) candidates.push_back(p);
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& [key, p] : state_.dres) candidates.push_back(p);
  last_reevaluated_ = candidates.size();
  last_step_fresh_ = false;
  return candidates;
}

void GlobalBoundsEngine::search_from_node(const Pattern& b) {
  const bool in_result = state_.result.contains(b);
  const bool in_dres = state_.dres.contains(b);
  if (!in_result && !in_dres) throw Error(ErrorCode::kParameter, "search_from_node needs a tracked pattern");
  const auto* rec = cache_.find(b);
  if (rec == nullptr || rec->counted_up_to_k != k_) {
    throw Error(ErrorCode::kCacheCoherence, "pattern not counted up to k=" + std::to_string(k_));
  }
  const std::int64_t size = rec->size_in_data;
  const std::int64_t count = rec->topk_count;
  ++state_.evaluated;
  if (test_.violates(count, size, k_)) {
    // Still violating; a dres member may have lost its result ancestor.
    if (in_dres) update(state_.result, state_.dres, b);
    return;
  }
  if (in_result) {
    remove_from_result(b);
  } else {
    state_.dres.erase(b);
  }
  std::deque<QueueItem> queue;
  push_children(queue, b, kNoSchedule, data_.schema(), state_);
  continue_search(queue, cache_, test_, k_, state_);
}

void GlobalBoundsEngine::remove_from_result(const Pattern& b) {
  state_.result.erase(b);
  for (const auto& d : state_.dres.proper_descendants_of(b)) {
    if (state_.result.has_proper_ancestor_of(d)) continue;
    const std::int64_t count = cache_.topk_count(d, k_);
    ++state_.evaluated;
    if (test_.violates(count, cache_.pattern_size(d), k_)) update(state_.result, state_.dres, d);
  }
}

ResultSet GlobalBoundsEngine::run() {
  ResultSet results;
  for (std::size_t k = spec_.k_min; k <= spec_.k_max; ++k) {
    const auto start_time = std::chrono::steady_clock::now();
    const std::size_t evaluated_before = k == spec_.k_min ? 0 : state_.evaluated;
    const std::size_t generated_before = k == spec_.k_min ? 0 : state_.generated.size();
    if (k == spec_.k_min) {
      start();
    } else {
      advance();
    }
    KStats& stats = results.stats[k];
    stats.evaluated = state_.evaluated - evaluated_before;
    stats.generated = state_.generated.size() - generated_before;
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    results.per_k[k] = state_.result;
  }
  return results;
}

ResultSet global_bounds(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec) {
  GlobalBoundsEngine engine(data, ranking, spec);
  return engine.run();
}

}  // namespace rankaudit
