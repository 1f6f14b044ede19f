#pragma once

#include <cstddef>
#include <map>

#include "rankaudit/pattern.hpp"

namespace rankaudit {

struct KStats {
  std::size_t generated = 0;  // patterns produced by children expansion
  std::size_t evaluated = 0;  // top-k count evaluations against the bound
  double wall_seconds = 0.0;
};

// Per-k antichains of most-general violating patterns.
struct ResultSet {
  std::map<std::size_t, PatternSet> per_k;
  std::map<std::size_t, KStats> stats;

  std::size_t total_evaluated() const;
  std::size_t total_generated() const;
};

// Per-k pattern-set equality (statistics are ignored).
bool same_patterns(const ResultSet& a, const ResultSet& b);

// True iff no member of the set properly contains another member.
bool is_antichain(const PatternSet& set);

}  // namespace rankaudit
