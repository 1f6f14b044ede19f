#include "rankaudit/prop_bounds.hpp"

#include <algorithm>
#include <chrono>

#include "rankaudit/error.hpp"

namespace rankaudit {

std::int64_t k_tilde(std::int64_t current_count, std::int64_t size, Fraction alpha, std::size_t n) {
  using Wide = __int128;
  const Wide denominator = Wide(alpha.num) * size;
  if (denominator <= 0) throw Error(ErrorCode::kUndefinedSchedule, "alpha * size must be positive");
  const Wide numerator = Wide(current_count) * alpha.den * static_cast<Wide>(n);
  return static_cast<std::int64_t>(numerator / denominator) + 1;
}

void KSchedule::insert(const Pattern& p, Entry entry) {
  erase(p);
  entries_.emplace(p.key(), entry);
  by_k_.emplace(entry.k_tilde, p.key());
}

bool KSchedule::erase(const Pattern& p) {
  auto it = entries_.find(p.key());
  if (it == entries_.end()) return false;
  by_k_.erase({it->second.k_tilde, p.key()});
  entries_.erase(it);
  return true;
}

const KSchedule::Entry* KSchedule::find(const Pattern& p) const {
  auto it = entries_.find(p.key());
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<Pattern> KSchedule::due_at(std::int64_t k) const {
  std::vector<Pattern> due;
  for (auto it = by_k_.lower_bound({k, std::string()}); it != by_k_.end() && it->first == k; ++it) {
    due.push_back(Pattern::from_key(it->second));
  }
  return due;
}

std::vector<std::pair<Pattern, KSchedule::Entry>> KSchedule::entries() const {
  std::vector<std::pair<Pattern, Entry>> out;
  for (const auto& [k, key] : by_k_) out.emplace_back(Pattern::from_key(key), entries_.at(key));
  return out;
}

class PropBoundsEngine::TreeObserver final : public SearchObserver {
 public:
  explicit TreeObserver(PropBoundsEngine& engine) : engine_(engine) {}

  void on_violating(const Pattern& p, std::int64_t, std::int64_t) override {
    Node node;
    node.pattern = p;
    node.violating = true;
    engine_.tree_.insert_or_assign(p.key(), std::move(node));
  }

  std::int64_t on_expanded(const Pattern& p, std::int64_t count, std::int64_t size,
                           std::int64_t ancestor_min) override {
    Node node;
    node.pattern = p;
    engine_.set_expanded(node, count, size, ancestor_min);
    const std::int64_t down = std::min(ancestor_min, node.k_tilde);
    engine_.tree_.insert_or_assign(p.key(), std::move(node));
    return down;
  }

 private:
  PropBoundsEngine& engine_;
};

PropBoundsEngine::PropBoundsEngine(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec)
    : data_(data), spec_(spec), cache_(data, ranking), test_(spec, data.n_rows()) {
  if (spec.mode != BoundMode::kProportional) {
    throw Error(ErrorCode::kWrongMode, "PropBounds needs a proportional bound spec");
  }
  validate_bounds(spec, data);
}

void PropBoundsEngine::set_expanded(Node& node, std::int64_t count, std::int64_t size, std::int64_t ancestor_min) {
  node.violating = false;
  node.count = count;
  node.k_tilde = k_tilde(count, size, spec_.alpha, data_.n_rows());
  node.ancestor_min = ancestor_min;
  reschedule(node, count);
}

// A node is scheduled only when its checkpoint undercuts every tree ancestor;
// otherwise an ancestor fires no later and takes the node's subtree with it.
void PropBoundsEngine::reschedule(const Node& node, std::int64_t count) {
  if (!node.violating && node.k_tilde < node.ancestor_min) {
    schedule_.insert(node.pattern, {node.k_tilde, count});
  } else {
    schedule_.erase(node.pattern);
  }
}

void PropBoundsEngine::start() {
  k_ = spec_.k_min;
  state_ = SearchOutcome{};
  schedule_ = KSchedule{};
  tree_.clear();
  visits_.clear();
  std::deque<QueueItem> queue;
  push_children(queue, Pattern{}, kNoSchedule, data_.schema(), state_);
  TreeObserver observer(*this);
  continue_search(queue, cache_, test_, k_, state_, &observer);
  state_.k_schedule.clear();
  for (const auto& [p, entry] : schedule_.entries()) state_.k_schedule[p.key()] = entry.k_tilde;
}

void PropBoundsEngine::advance() {
  if (k_ == 0) throw Error(ErrorCode::kParameter, "advance() before start()");
  if (k_ >= spec_.k_max) throw Error(ErrorCode::kRangeError, "already at k_max");
  const std::size_t next = k_ + 1;
  std::vector<Pattern> tracked = state_.result.to_vector();
  for (const auto& [key, p] : state_.dres) tracked.push_back(p);
  cache_.advance_k(next, tracked);
  k_ = next;
  selective_td(next);
  fire_and_revisit(next);
  state_.k_schedule.clear();
  for (const auto& [p, entry] : schedule_.entries()) state_.k_schedule[p.key()] = entry.k_tilde;
}

void PropBoundsEngine::expand_from(const Pattern& p, std::int64_t down) {
  std::deque<QueueItem> queue;
  push_children(queue, p, down, data_.schema(), state_);
  TreeObserver observer(*this);
  continue_search(queue, cache_, test_, k_, state_, &observer);
}

void PropBoundsEngine::selective_td(std::size_t k) {
  if (k != k_) throw Error(ErrorCode::kCacheCoherence, "selective_td must run at the engine's current k");
  visits_.clear();
  const auto row = data_.row(cache_.ranking().at(k));
  const std::size_t width = data_.n_attributes();

  std::deque<QueueItem> queue;
  for (AttrIndex a = 0; a < width; ++a) queue.push_back({Pattern({{a, row[a]}}), kNoSchedule});

  while (!queue.empty()) {
    QueueItem item = std::move(queue.front());
    queue.pop_front();
    auto it = tree_.find(item.pattern.key());
    if (it == tree_.end()) continue;  // below the size threshold
    Node& node = it->second;
    const Pattern p = node.pattern;
    visits_.push_back(p);
    const std::int64_t size = cache_.pattern_size(p);
    const std::int64_t count = cache_.topk_count(p, k);
    ++state_.evaluated;
    const bool violates = test_.violates(count, size, k);

    if (node.violating) {
      if (violates) continue;
      if (state_.result.contains(p)) {
        remove_from_result(p);
      } else {
        state_.dres.erase(p);
      }
      set_expanded(node, count, size, item.ancestor_min);
      expand_from(p, std::min(item.ancestor_min, node.k_tilde));
      continue;
    }
    if (violates) {
      mark_violating(node);
      continue;
    }

    const std::int64_t old_down = std::min(node.ancestor_min, node.k_tilde);
    set_expanded(node, count, size, item.ancestor_min);
    const std::int64_t new_down = std::min(item.ancestor_min, node.k_tilde);
    for (AttrIndex a = p.max_attr() + 1; a < width; ++a) queue.push_back({p.with({a, row[a]}), new_down});
    if (new_down == old_down) continue;
    // Children the new row does not match keep their counts, but the bound
    // they are compared against for scheduling moved.
    for (const auto& child : generate_children(p, data_.schema())) {
      const auto& added = child.assignments().back();
      if (row[added.attr] == added.code) continue;
      auto c = tree_.find(child.key());
      if (c != tree_.end() && !c->second.violating && c->second.ancestor_min != new_down) {
        revalidate(child, new_down);
      }
    }
  }
}

void PropBoundsEngine::revalidate(const Pattern& p, std::int64_t ancestor_min) {
  Node& node = tree_.at(p.key());
  node.ancestor_min = ancestor_min;
  reschedule(node, node.count);
  const std::int64_t down = std::min(ancestor_min, node.k_tilde);
  for (const auto& child : generate_children(p, data_.schema())) {
    auto c = tree_.find(child.key());
    if (c != tree_.end() && !c->second.violating && c->second.ancestor_min != down) revalidate(child, down);
  }
}

void PropBoundsEngine::fire_and_revisit(std::size_t k) {
  const auto row = data_.row(cache_.ranking().at(k));
  for (const auto& p : schedule_.due_at(static_cast<std::int64_t>(k))) {
    if (!schedule_.contains(p) || matches(row, p)) continue;  // collapsed or just revisited
    Node& node = tree_.at(p.key());
    const std::int64_t size = cache_.pattern_size(p);
    const std::int64_t count = cache_.topk_count(p, k);
    ++state_.evaluated;
    if (test_.violates(count, size, k)) {
      mark_violating(node);
    } else {
      set_expanded(node, count, size, node.ancestor_min);
    }
  }
  for (const auto& d : state_.dres.to_vector()) {
    if (!matches(row, d) && state_.dres.contains(d)) update(state_.result, state_.dres, d);
  }
}

void PropBoundsEngine::mark_violating(Node& node) {
  collapse_below(node.pattern);
  node.violating = true;
  node.k_tilde = kNoSchedule;
  schedule_.erase(node.pattern);
  update(state_.result, state_.dres, node.pattern);
}

// Drops the subtree below p: once p violates, its descendants are no longer
// reached by a top-down search.
void PropBoundsEngine::collapse_below(const Pattern& p) {
  for (const auto& child : generate_children(p, data_.schema())) {
    auto it = tree_.find(child.key());
    if (it == tree_.end()) continue;
    if (it->second.violating) {
      state_.result.erase(child);
      state_.dres.erase(child);
    } else {
      schedule_.erase(child);
      collapse_below(child);
    }
    tree_.erase(it);
  }
}

void PropBoundsEngine::remove_from_result(const Pattern& b) {
  state_.result.erase(b);
  for (const auto& d : state_.dres.proper_descendants_of(b)) {
    if (state_.result.has_proper_ancestor_of(d)) continue;
    const std::int64_t count = cache_.topk_count(d, k_);
    ++state_.evaluated;
    if (test_.violates(count, cache_.pattern_size(d), k_)) update(state_.result, state_.dres, d);
  }
}

ResultSet PropBoundsEngine::run() {
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

ResultSet prop_bounds(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec) {
  PropBoundsEngine engine(data, ranking, spec);
  return engine.run();
}

}  // namespace rankaudit
