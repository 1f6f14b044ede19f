#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rankaudit/bounds.hpp"
#include "rankaudit/ranking.hpp"
#include "rankaudit/result.hpp"

namespace rankaudit {

inline constexpr std::size_t kDefaultEnumerationCap = 2'000'000;

// Number of patterns over the schema: the product of (|Dom(A_i)| + 1).
// Saturates at SIZE_MAX.
std::size_t pattern_space_size(const Schema& schema);

// Calls fn on every pattern over the schema (including the empty one)
// exactly once. Throws kTooLarge when the space exceeds the cap.
void for_each_pattern(const Schema& schema, const std::function<void(const Pattern&)>& fn,
                      std::size_t cap = kDefaultEnumerationCap);
std::vector<Pattern> enumerate_all_patterns(const Schema& schema, std::size_t cap = kDefaultEnumerationCap);

// Brute-force ground truth. Counts every pattern by letting each row
// enumerate the patterns it satisfies, then keeps, for every k, the violators
// none of whose proper subsets violate. The empty pattern is never reported.
ResultSet oracle_detect(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec,
                        std::size_t cap = kDefaultEnumerationCap);

}  // namespace rankaudit
