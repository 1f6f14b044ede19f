#include "rankaudit/search.hpp"

#include <algorithm>
#include <chrono>

#include "rankaudit/error.hpp"
#include "rankaudit/prop_bounds.hpp"

namespace rankaudit {

namespace {

class ScheduleObserver final : public SearchObserver {
 public:
  ScheduleObserver(const BoundTest& test, SearchOutcome& outcome) : test_(test), outcome_(outcome) {}

  std::int64_t on_expanded(const Pattern& p, std::int64_t count, std::int64_t size,
                           std::int64_t ancestor_min) override {
    const std::int64_t kt = k_tilde(count, size, test_.spec().alpha, test_.n_rows());
    if (kt < ancestor_min) outcome_.k_schedule[p.key()] = kt;
    return std::min(kt, ancestor_min);
  }

 private:
  const BoundTest& test_;
  SearchOutcome& outcome_;
};

}  // namespace

void update(PatternSet& result, PatternSet& dres, const Pattern& p) {
  if (result.has_proper_ancestor_of(p)) {
    result.erase(p);
    dres.insert(p);
    return;
  }
  dres.erase(p);
  result.insert(p);
  for (const auto& d : result.proper_descendants_of(p)) {
    result.erase(d);
    dres.insert(d);
  }
}

void push_children(std::deque<QueueItem>& queue, const Pattern& p, std::int64_t ancestor_min, const Schema& schema,
                   SearchOutcome& outcome) {
  auto children = generate_children(p, schema);
  outcome.generated.record(children);
  for (auto& child : children) queue.push_back({std::move(child), ancestor_min});
}

void continue_search(std::deque<QueueItem>& queue, CountCache& cache, const BoundTest& test, std::size_t k,
                     SearchOutcome& outcome, SearchObserver* observer) {
  const Schema& schema = cache.data().schema();
  while (!queue.empty()) {
    QueueItem item = std::move(queue.front());
    queue.pop_front();
    const Pattern& p = item.pattern;
    const std::int64_t size = cache.pattern_size(p);
    // Specializing never grows a pattern, so nothing below a small node can qualify.
    if (!test.large_enough(size)) continue;
    const std::int64_t count = cache.topk_count(p, k);
    ++outcome.evaluated;
    if (test.violates(count, size, k)) {
      update(outcome.result, outcome.dres, p);
      if (observer) observer->on_violating(p, count, size);
    } else {
      const std::int64_t down = observer ? observer->on_expanded(p, count, size, item.ancestor_min) : kNoSchedule;
      push_children(queue, p, down, schema, outcome);
    }
  }
}

SearchOutcome top_down_search(CountCache& cache, const BoundsSpec& spec, std::size_t k) {
  const Dataset& data = cache.data();
  if (k < 1 || k > data.n_rows()) {
    throw Error(ErrorCode::kRangeError, "k=" + std::to_string(k) + " outside 1.." + std::to_string(data.n_rows()));
  }
  const BoundTest test(spec, data.n_rows());
  SearchOutcome outcome;
  std::deque<QueueItem> queue;
  push_children(queue, Pattern{}, kNoSchedule, data.schema(), outcome);
  if (spec.mode == BoundMode::kProportional) {
    ScheduleObserver observer(test, outcome);
    continue_search(queue, cache, test, k, outcome, &observer);
  } else {
    continue_search(queue, cache, test, k, outcome);
  }
  return outcome;
}

SearchOutcome top_down_search(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec, std::size_t k) {
  validate_bounds(spec, data);
  CountCache cache(data, ranking);
  return top_down_search(cache, spec, k);
}

ResultSet iter_td(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec) {
  validate_bounds(spec, data);
  CountCache cache(data, ranking);
  ResultSet results;
  for (std::size_t k = spec.k_min; k <= spec.k_max; ++k) {
    const auto start = std::chrono::steady_clock::now();
    SearchOutcome outcome = top_down_search(cache, spec, k);
    KStats& stats = results.stats[k];
    stats.generated = outcome.generated.size();
    stats.evaluated = outcome.evaluated;
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.per_k[k] = std::move(outcome.result);
  }
  return results;
}

}  // namespace rankaudit
