#pragma once

#include <cstdint>
#include <vector>

#include "rankaudit/bounds.hpp"
#include "rankaudit/ranking.hpp"

namespace rankaudit {

// Adversarial family with C(n, n/2) most-general violators: n binary
// attributes, row i (1..n) has only attribute i set to 1, row n+1 is all
// zeros, ranked in row order.
struct WorstCaseInstance {
  Dataset data;
  Ranking ranking;
  BoundsSpec global_spec;        // tau_s = 2, k = n, L_n = n/2 + 1
  Fraction alpha;                // (n+3)/(n+4)
  BoundsSpec proportional_spec;  // tau_s = 2, k = n, alpha
};

WorstCaseInstance worst_case(std::size_t n);

// Uniform i.i.d. categorical rows fully determined by the seed. Attribute i
// is named "A<i>" with labels "0".."c-1"; values that never occur are dropped
// from the domain.
Dataset random_dataset(std::uint64_t seed, std::size_t n_rows, const std::vector<std::size_t>& cardinalities);

// A uniformly random ranking of the dataset's rows.
Ranking random_ranking(std::uint64_t seed, const Dataset& data);

}  // namespace rankaudit
