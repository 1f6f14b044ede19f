#include "rankaudit/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "rankaudit/error.hpp"

namespace rankaudit {

namespace {

// Mixed-radix encoding: digit a ranges over 0..|Dom(a)|, where |Dom(a)| means
// "attribute not assigned". Removing an assignment raises the index, so every
// proper subset of a pattern has a larger index.
struct Radix {
  std::vector<std::size_t> base;
  std::vector<std::size_t> stride;
  std::size_t total = 1;

  explicit Radix(const Schema& schema, std::size_t cap) {
    for (AttrIndex a = 0; a < schema.size(); ++a) {
      const std::size_t b = schema.domain_size(a) + 1;
      if (total > cap / b) {
        throw Error(ErrorCode::kTooLarge, "pattern space exceeds the enumeration cap of " + std::to_string(cap));
      }
      stride.push_back(total);
      base.push_back(b);
      total *= b;
    }
    if (total > cap) {
      throw Error(ErrorCode::kTooLarge, "pattern space exceeds the enumeration cap of " + std::to_string(cap));
    }
  }

  std::size_t wildcard(AttrIndex a) const { return base[a] - 1; }
  std::size_t digit(std::size_t index, AttrIndex a) const { return (index / stride[a]) % base[a]; }

  Pattern decode(std::size_t index) const {
    std::vector<Assignment> assignments;
    for (AttrIndex a = 0; a < base.size(); ++a) {
      const std::size_t d = digit(index, a);
      if (d != wildcard(a)) assignments.push_back({a, static_cast<Code>(d)});
    }
    return Pattern(std::move(assignments));
  }

  std::size_t empty_index() const { return total - 1; }
};

// Every pattern the row satisfies: each attribute either matches the row's
// code or is left unassigned.
template <typename Fn>
void for_each_satisfied(const Radix& radix, std::span<const Code> row, Fn&& fn) {
  const std::size_t m = row.size();
  const std::size_t subsets = std::size_t{1} << m;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::size_t index = 0;
    for (std::size_t a = 0; a < m; ++a) {
      const std::size_t d = (mask >> a) & 1 ? row[a] : radix.wildcard(static_cast<AttrIndex>(a));
      index += d * radix.stride[a];
    }
    fn(index);
  }
}

}  // namespace

std::size_t pattern_space_size(const Schema& schema) {
  std::size_t total = 1;
  for (AttrIndex a = 0; a < schema.size(); ++a) {
    const std::size_t b = schema.domain_size(a) + 1;
    if (total > std::numeric_limits<std::size_t>::max() / b) return std::numeric_limits<std::size_t>::max();
    total *= b;
  }
  return total;
}

void for_each_pattern(const Schema& schema, const std::function<void(const Pattern&)>& fn, std::size_t cap) {
  const Radix radix(schema, cap);
  for (std::size_t index = 0; index < radix.total; ++index) fn(radix.decode(index));
}

std::vector<Pattern> enumerate_all_patterns(const Schema& schema, std::size_t cap) {
  std::vector<Pattern> out;
  for_each_pattern(schema, [&](const Pattern& p) { out.push_back(p); }, cap);
  return out;
}

ResultSet oracle_detect(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec, std::size_t cap) {
  validate_bounds(spec, data);
  if (ranking.size() != data.n_rows()) throw Error(ErrorCode::kMalformedRanking, "ranking/dataset size mismatch");
  const Schema& schema = data.schema();
  if (schema.size() >= 8 * sizeof(std::size_t) - 1) throw Error(ErrorCode::kTooLarge, "too many attributes");
  const Radix radix(schema, cap);
  const std::size_t n = data.n_rows();

  std::vector<std::int64_t> size(radix.total, 0);
  for (RowIndex r = 0; r < n; ++r) {
    for_each_satisfied(radix, data.row(r), [&](std::size_t index) { ++size[index]; });
  }

  // Non-empty patterns meeting the size threshold, subsets before supersets.
  std::vector<std::size_t> large;
  for (std::size_t index = radix.total; index-- > 0;) {
    if (index != radix.empty_index() && size[index] >= spec.size_threshold) large.push_back(index);
  }

  auto violates = [&](std::int64_t count, std::int64_t sz, std::size_t k) {
    if (spec.mode == BoundMode::kGlobal) return count < spec.lower_schedule.at(k);
    using Wide = __int128;
    return Wide(count) * spec.alpha.den * Wide(n) < Wide(spec.alpha.num) * sz * Wide(k);
  };

  std::vector<std::int64_t> topk(radix.total, 0);
  // state: 0 = not violating, 1 = violating, 2 = some proper subset violates
  std::vector<std::uint8_t> violating(radix.total, 0);
  std::vector<std::uint8_t> covered(radix.total, 0);
  ResultSet results;
  for (std::size_t k = 1; k <= spec.k_max; ++k) {
    for_each_satisfied(radix, data.row(ranking.at(k)), [&](std::size_t index) { ++topk[index]; });
    if (k < spec.k_min) continue;

    PatternSet found;
    for (std::size_t index : large) {
      bool has_violating_subset = false;
      for (AttrIndex a = 0; a < radix.base.size() && !has_violating_subset; ++a) {
        const std::size_t d = radix.digit(index, a);
        if (d == radix.wildcard(a)) continue;
        const std::size_t parent = index + (radix.wildcard(a) - d) * radix.stride[a];
        if (parent == radix.empty_index()) continue;
        has_violating_subset = violating[parent] || covered[parent];
      }
      covered[index] = has_violating_subset;
      violating[index] = violates(topk[index], size[index], k);
      if (violating[index] && !has_violating_subset) found.insert(radix.decode(index));
    }

    // Self-check: an antichain whose members have only non-violating subsets.
    if (!is_antichain(found)) throw Error(ErrorCode::kParameter, "oracle produced a non-antichain");
    for (const auto& [key, p] : found) {
      const std::size_t m = p.size();
      for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << m); ++mask) {
        std::size_t index = radix.empty_index();
        for (std::size_t i = 0; i < m; ++i) {
          if (!((mask >> i) & 1)) continue;
          const auto& [attr, code] = p.assignments()[i];
          index -= (radix.wildcard(attr) - code) * radix.stride[attr];
        }
        if (violating[index]) throw Error(ErrorCode::kParameter, "oracle reported a non-minimal violator");
      }
    }
    results.per_k[k] = std::move(found);
    results.stats[k] = KStats{0, large.size(), 0.0};
  }
  return results;
}

}  // namespace rankaudit
