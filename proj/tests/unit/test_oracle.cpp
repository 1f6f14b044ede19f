#include <gtest/gtest.h>

#include <set>

#include "rankaudit/error.hpp"
#include "rankaudit/oracle.hpp"
#include "support/fixtures.hpp"

namespace rankaudit {
namespace {

using testing::pat;
using testing::pats;
using testing::students;

TEST(Enumerate, PatternSpaceSizes) {
  const auto s = students();
  EXPECT_EQ(pattern_space_size(s.data.schema()), 108u);
  const auto all = enumerate_all_patterns(s.data.schema());
  EXPECT_EQ(all.size(), 108u);
  std::set<std::string> keys;
  for (const auto& p : all) keys.insert(p.key());
  EXPECT_EQ(keys.size(), 108u);
  EXPECT_EQ(keys.count(Pattern{}.key()), 1u);

  const Schema one({{"A", {"0", "1"}}});
  EXPECT_EQ(enumerate_all_patterns(one).size(), 3u);
  const Schema four({{"A", {"0", "1"}}, {"B", {"0", "1"}}, {"C", {"0", "1"}}, {"D", {"0", "1"}}});
  EXPECT_EQ(enumerate_all_patterns(four).size(), 81u);
}

TEST(Enumerate, CapIsEnforced) {
  const auto s = students();
  try {
    enumerate_all_patterns(s.data.schema(), 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(Oracle, RunningExampleGlobal) {
  const auto s = students();
  const BoundsSpec spec = BoundsSpec::global(4, 4, 4, {{4, 2}});
  const ResultSet rs = oracle_detect(s.data, s.ranking, spec);
  const PatternSet& res4 = rs.per_k.at(4);
  EXPECT_TRUE(res4.contains(pat(s.data, "Address=U")));
  EXPECT_TRUE(res4.contains(pat(s.data, "Failures=1")));
  EXPECT_FALSE(res4.contains(pat(s.data, "Gender=F,Address=U")));
  EXPECT_TRUE(is_antichain(res4));
}

TEST(Oracle, RunningExampleProportional) {
  const auto s = students();
  const BoundsSpec spec = BoundsSpec::proportional(5, 4, 5, Fraction::parse("0.9"));
  const ResultSet rs = oracle_detect(s.data, s.ranking, spec);
  EXPECT_EQ(rs.per_k.at(4), pats(s.data, {"School=GP", "Address=U", "Failures=1"}));
  EXPECT_TRUE(rs.per_k.at(5).contains(pat(s.data, "Gender=F")));
}

TEST(Oracle, ThresholdAboveDataSizeFindsNothing) {
  const auto s = students();
  const BoundsSpec spec = BoundsSpec::global(17, 1, 16, {{1, 1}});
  const ResultSet rs = oracle_detect(s.data, s.ranking, spec);
  for (const auto& [k, set] : rs.per_k) EXPECT_TRUE(set.empty());
}

TEST(Oracle, WorstCaseFourReturnsTheTwoZeroPatterns) {
  const auto inst = worst_case(4);
  const ResultSet rs = oracle_detect(inst.data, inst.ranking, inst.global_spec);
  const PatternSet& found = rs.per_k.at(4);
  ASSERT_EQ(found.size(), 6u);
  for (const auto& [key, p] : found) {
    ASSERT_EQ(p.size(), 2u);
    for (const auto& a : p.assignments()) EXPECT_EQ(inst.data.schema().attribute(a.attr).domain[a.code], "0");
  }
}

}  // namespace
}  // namespace rankaudit
