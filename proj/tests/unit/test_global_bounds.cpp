#include <gtest/gtest.h>

#include <algorithm>

#include "rankaudit/error.hpp"
#include "rankaudit/global_bounds.hpp"
#include "rankaudit/oracle.hpp"
#include "support/fixtures.hpp"

namespace rankaudit {
namespace {

using testing::pat;
using testing::pats;
using testing::students;

TEST(GlobalBounds, RunningExampleStepFromK4ToK5) {
  const auto s = students();
  const BoundsSpec spec = BoundsSpec::global(4, 4, 5, {{4, 2}});
  const ResultSet rs = global_bounds(s.data, s.ranking, spec);
  const ResultSet baseline = iter_td(s.data, s.ranking, spec);
  EXPECT_TRUE(same_patterns(rs, baseline));

  const PatternSet& res4 = rs.per_k.at(4);
  const PatternSet& res5 = rs.per_k.at(5);
  const PatternSet replacements = pats(s.data, {"Address=U,Failures=1", "Gender=F,Address=U", "Gender=M,Address=U",
                                                "Gender=F,Failures=1", "Address=R,Failures=1"});
  // Res[5] is the replacement set plus the members of Res[4] row 14 does not match.
  PatternSet expected = replacements;
  for (const auto& [key, p] : res4) {
    if (!satisfies(s.data, 13, p)) expected.insert(p);
  }
  EXPECT_EQ(res5, expected);
  EXPECT_FALSE(res5.contains(pat(s.data, "Address=U")));
  EXPECT_FALSE(res5.contains(pat(s.data, "Failures=1")));
}

TEST(GlobalBounds, SearchFromNodeOnTheRunningExample) {
  const auto s = students();
  const BoundsSpec spec = BoundsSpec::global(4, 4, 5, {{4, 2}});
  GlobalBoundsEngine engine(s.data, s.ranking, spec);
  engine.start();
  const Pattern address_u = pat(s.data, "Address=U");
  ASSERT_TRUE(engine.state().result.contains(address_u));
  const PatternSet dres_before = engine.state().dres;

  const auto candidates = engine.admit_next();
  EXPECT_EQ(engine.k(), 5u);
  ASSERT_GE(candidates.size(), 2u);
  EXPECT_EQ(candidates[0], address_u);
  EXPECT_EQ(candidates[1], pat(s.data, "Failures=1"));
  EXPECT_EQ(engine.last_reevaluated(), 2 + dres_before.size());

  engine.search_from_node(address_u);
  const SearchOutcome& st = engine.state();
  const Pattern u1 = pat(s.data, "Address=U,Failures=1");
  EXPECT_FALSE(st.result.contains(address_u));
  EXPECT_FALSE(st.dres.contains(address_u));
  EXPECT_TRUE(st.result.contains(pat(s.data, "Gender=F,Address=U")));
  EXPECT_TRUE(st.result.contains(pat(s.data, "Gender=M,Address=U")));
  // {Failures=1} is still in the result, so the new child waits in dres.
  EXPECT_TRUE(st.dres.contains(u1));

  engine.search_from_node(pat(s.data, "Failures=1"));
  EXPECT_TRUE(st.result.contains(u1));
  EXPECT_TRUE(st.result.contains(pat(s.data, "Gender=F,Failures=1")));
  EXPECT_TRUE(st.result.contains(pat(s.data, "Address=R,Failures=1")));
  EXPECT_FALSE(st.result.contains(pat(s.data, "Failures=1")));
  EXPECT_TRUE(is_antichain(st.result));
}

TEST(GlobalBounds, SearchFromNodeKeepsStillViolatingPatterns) {
  const auto s = students();
  const BoundsSpec spec = BoundsSpec::global(4, 4, 5, {{4, 2}});
  GlobalBoundsEngine engine(s.data, s.ranking, spec);
  engine.start();
  engine.admit_next();
  // Row 14 is (M, MS, U, 1); {School=GP} has no top-5 member besides row 12.
  const Pattern gp = pat(s.data, "School=GP");
  ASSERT_TRUE(engine.state().result.contains(gp));
  const PatternSet result = engine.state().result;
  const PatternSet dres = engine.state().dres;
  engine.search_from_node(gp);
  EXPECT_EQ(engine.state().result, result);
  EXPECT_EQ(engine.state().dres, dres);
}

TEST(GlobalBounds, SearchFromNodeNeedsATrackedPattern) {
  const auto s = students();
  const BoundsSpec spec = BoundsSpec::global(4, 4, 5, {{4, 2}});
  GlobalBoundsEngine engine(s.data, s.ranking, spec);
  engine.start();
  EXPECT_THROW(engine.search_from_node(pat(s.data, "Gender=F")), Error);
}

TEST(GlobalBounds, RejectsProportionalSpecs) {
  const auto s = students();
  const BoundsSpec spec = BoundsSpec::proportional(4, 4, 5, Fraction::parse("0.9"));
  try {
    GlobalBoundsEngine engine(s.data, s.ranking, spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWrongMode);
  }
}

TEST(GlobalBounds, StepsMatchAFreshSearch) {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const auto inst = testing::random_instance(seed, 6, 300, 20);
    SCOPED_TRACE(inst.description);
    const BoundsSpec flat = BoundsSpec::global(inst.global.size_threshold, inst.global.k_min, inst.global.k_max,
                                               {{inst.global.k_min, inst.global.lower_bound(inst.global.k_min)}});
    GlobalBoundsEngine engine(inst.data, inst.ranking, flat);
    engine.start();
    while (engine.k() < flat.k_max) {
      // Revisit in reverse order to exercise order independence.
      auto candidates = engine.admit_next();
      std::reverse(candidates.begin(), candidates.end());
      for (const auto& b : candidates) {
        if (engine.state().result.contains(b) || engine.state().dres.contains(b)) engine.search_from_node(b);
      }
      const SearchOutcome fresh = top_down_search(inst.data, inst.ranking, flat, engine.k());
      ASSERT_EQ(engine.state().result, fresh.result) << "k=" << engine.k();
      for (const auto& [key, p] : engine.state().dres) {
        ASSERT_TRUE(engine.state().result.has_proper_ancestor_of(p));
      }
    }
  }
}

TEST(GlobalBounds, EqualsIterTDAndOracle) {
  for (std::uint64_t seed = 200; seed < 240; ++seed) {
    const auto inst = testing::random_instance(seed, 6, 300, 25);
    SCOPED_TRACE(inst.description);
    const ResultSet fast = global_bounds(inst.data, inst.ranking, inst.global);
    EXPECT_TRUE(same_patterns(fast, iter_td(inst.data, inst.ranking, inst.global)));
    EXPECT_TRUE(same_patterns(fast, oracle_detect(inst.data, inst.ranking, inst.global)));
  }
}

TEST(GlobalBounds, RisingBoundAtEveryStepMatchesIterTDStatistics) {
  const Dataset data = random_dataset(5, 200, {2, 3, 2, 2, 3});
  const Ranking ranking = random_ranking(6, data);
  std::vector<std::pair<std::size_t, std::int64_t>> steps;
  for (std::size_t k = 20; k <= 35; ++k) steps.emplace_back(k, static_cast<std::int64_t>(k - 18));
  const BoundsSpec spec = BoundsSpec::global(5, 20, 35, steps);
  const ResultSet fast = global_bounds(data, ranking, spec);
  const ResultSet slow = iter_td(data, ranking, spec);
  EXPECT_TRUE(same_patterns(fast, slow));
  for (const auto& [k, st] : slow.stats) {
    EXPECT_EQ(fast.stats.at(k).evaluated, st.evaluated) << "k=" << k;
    EXPECT_EQ(fast.stats.at(k).generated, st.generated) << "k=" << k;
  }
}

TEST(GlobalBounds, FlatBoundEvaluatesFewerNodes) {
  const Dataset data = random_dataset(7, 500, {2, 2, 2, 2, 2, 2});
  const Ranking ranking = random_ranking(8, data);
  const BoundsSpec spec = BoundsSpec::global(10, 10, 49, {{10, 5}});
  const ResultSet fast = global_bounds(data, ranking, spec);
  const ResultSet slow = iter_td(data, ranking, spec);
  EXPECT_TRUE(same_patterns(fast, slow));
  EXPECT_LT(fast.total_evaluated(), slow.total_evaluated());
}

TEST(GlobalBounds, ReevaluationIsLimitedToMatchedResultsAndDres) {
  const Dataset data = random_dataset(9, 300, {2, 3, 2, 2});
  const Ranking ranking = random_ranking(10, data);
  const BoundsSpec spec = BoundsSpec::global(5, 10, 40, {{10, 4}});
  GlobalBoundsEngine engine(data, ranking, spec);
  engine.start();
  while (engine.k() < spec.k_max) {
    std::size_t matched = 0;
    const auto row = data.row(ranking.at(engine.k() + 1));
    for (const auto& [key, p] : engine.state().result) matched += matches(row, p) ? 1 : 0;
    const std::size_t expected = matched + engine.state().dres.size();
    engine.advance();
    EXPECT_FALSE(engine.last_step_was_fresh());
    EXPECT_EQ(engine.last_reevaluated(), expected);
  }
}

}  // namespace
}  // namespace rankaudit
