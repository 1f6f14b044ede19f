#pragma once

// Shared test fixtures: the 16-student running example and seeded random
// audit instances.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rankaudit/bounds.hpp"
#include "rankaudit/generators.hpp"
#include "rankaudit/pattern.hpp"
#include "rankaudit/random.hpp"
#include "rankaudit/ranking.hpp"

namespace rankaudit::testing {

struct Students {
  Dataset data;
  Ranking ranking;
  std::vector<double> grade;
};

inline Students students() {
  struct Row {
    const char* gender;
    const char* school;
    const char* address;
    const char* failures;
    double grade;
    std::int64_t rank;
  };
  static const Row rows[] = {
      {"F", "MS", "R", "1", 11, 8},  {"M", "MS", "R", "1", 15, 3}, {"M", "GP", "U", "1", 8, 10},
      {"M", "GP", "U", "2", 4, 16},  {"M", "MS", "R", "0", 19, 2}, {"F", "MS", "U", "1", 4, 15},
      {"F", "GP", "R", "1", 7, 11},  {"M", "GP", "R", "1", 6, 13}, {"F", "MS", "R", "0", 14, 4},
      {"F", "MS", "R", "2", 7, 12},  {"M", "MS", "R", "2", 13, 6}, {"F", "GP", "U", "0", 20, 1},
      {"F", "GP", "U", "2", 12, 7},  {"M", "MS", "U", "1", 13, 5}, {"F", "GP", "U", "1", 5, 14},
      {"M", "GP", "U", "0", 9, 9},
  };
  DatasetBuilder builder({"Gender", "School", "Address", "Failures"});
  std::vector<std::int64_t> ranks;
  std::vector<double> grade;
  for (const auto& r : rows) {
    builder.add_row({r.gender, r.school, r.address, r.failures});
    ranks.push_back(r.rank);
    grade.push_back(r.grade);
  }
  Dataset data = builder.build();
  Ranking ranking = Ranking::from_rank_column(data, ranks);
  return {std::move(data), std::move(ranking), std::move(grade)};
}

// Pattern from "Attr=Label,..." text against the dataset's schema.
inline Pattern pat(const Dataset& data, const std::string& text) { return parse_pattern(data.schema(), text); }

inline PatternSet pats(const Dataset& data, const std::vector<std::string>& texts) {
  PatternSet set;
  for (const auto& t : texts) set.insert(pat(data, t));
  return set;
}

struct Instance {
  Dataset data;
  Ranking ranking;
  BoundsSpec global;
  BoundsSpec proportional;
  std::string description;
};

// A random audit instance: 2-8 attributes of cardinality 2-4, 20-500 rows,
// a flat or stepped bound schedule and alpha drawn from {0.5, 0.8, 0.9, 1}.
inline Instance random_instance(std::uint64_t seed, std::size_t max_attrs = 8, std::size_t max_rows = 500,
                                std::size_t max_width = 40) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 17);
  auto draw = [&](std::size_t lo, std::size_t hi) { return lo + uniform_below(rng, hi - lo + 1); };

  const std::size_t n_attrs = draw(2, max_attrs);
  std::vector<std::size_t> cards;
  for (std::size_t a = 0; a < n_attrs; ++a) cards.push_back(draw(2, 4));
  const std::size_t n_rows = draw(20, max_rows);
  Dataset data = random_dataset(seed, n_rows, cards);
  Ranking ranking = random_ranking(seed + 1, data);

  const std::size_t width = draw(1, std::min(max_width, n_rows));
  const std::size_t k_min = draw(1, n_rows - width + 1);
  const std::size_t k_max = k_min + width - 1;
  const auto tau = static_cast<std::int64_t>(draw(std::max<std::size_t>(1, n_rows / 40), std::max<std::size_t>(1, n_rows / 6)));

  std::vector<std::pair<std::size_t, std::int64_t>> steps;
  const std::int64_t base = static_cast<std::int64_t>(draw(1, std::max<std::size_t>(1, k_min / 2 + 1)));
  steps.emplace_back(k_min, std::min<std::int64_t>(base, static_cast<std::int64_t>(k_min)));
  const bool stepped = uniform_below(rng, 2) == 1;
  if (stepped) {
    std::int64_t level = steps.front().second;
    for (std::size_t k = k_min + 1; k <= k_max; ++k) {
      if (uniform_below(rng, 6) == 0) {
        level = std::min<std::int64_t>(level + static_cast<std::int64_t>(draw(1, 3)), static_cast<std::int64_t>(k));
        steps.emplace_back(k, level);
      }
    }
  }
  BoundsSpec global = BoundsSpec::global(tau, k_min, k_max, steps);

  static const char* alphas[] = {"0.5", "0.8", "0.9", "1"};
  BoundsSpec proportional =
      BoundsSpec::proportional(tau, k_min, k_max, Fraction::parse(alphas[uniform_below(rng, 4)]));

  std::string description = "seed=" + std::to_string(seed) + " rows=" + std::to_string(n_rows) +
                            " attrs=" + std::to_string(n_attrs) + " k=[" + std::to_string(k_min) + "," +
                            std::to_string(k_max) + "] tau=" + std::to_string(tau) +
                            (stepped ? " stepped" : " flat") + " alpha=" + proportional.alpha.to_string();
  return {std::move(data), std::move(ranking), std::move(global), std::move(proportional), std::move(description)};
}

}  // namespace rankaudit::testing
