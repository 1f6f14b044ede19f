#include <gtest/gtest.h>

#include <cmath>

#include "rankaudit/error.hpp"
#include "rankaudit/explain.hpp"
#include "rankaudit/global_bounds.hpp"
#include "support/explain_fixtures.hpp"
#include "support/fixtures.hpp"

namespace rankaudit {
namespace {

using testing::pat;

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

TEST(Surrogate, LinearFitBeatsTheInterceptOnlyModel) {
  const auto inst = testing::ranked_by_attribute(1, 200, {4, 3, 2}, 0);
  const SurrogateModel model = fit_surrogate(inst.data, inst.ranking);
  EXPECT_EQ(model.kind(), SurrogateKind::kRidgeLinear);
  EXPECT_LT(model.training_mse(), model.baseline_mse());
  EXPECT_TRUE(model.warnings().empty());
}

TEST(Surrogate, PredictionsCorrelateWithRanksOnRandomRankings) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset data = random_dataset(seed, 150, {3, 3, 2, 4});
    const Ranking ranking = random_ranking(seed + 50, data);
    for (SurrogateKind kind : {SurrogateKind::kRidgeLinear, SurrogateKind::kRegressionTree}) {
      const SurrogateModel model = fit_surrogate(data, ranking, {kind, 1e-6, 6});
      std::vector<double> pred;
      std::vector<double> truth;
      for (RowIndex r = 0; r < data.n_rows(); ++r) {
        pred.push_back(model.predict(data.row(r)));
        truth.push_back(static_cast<double>(ranking.position_of(r)));
      }
      EXPECT_GT(pearson(pred, truth), 0.0);
      EXPECT_LE(model.training_mse(), model.baseline_mse() + 1e-9);
    }
  }
}

TEST(Surrogate, TreeDepthBoundsTheLeafCount) {
  const auto s = testing::students();
  const SurrogateModel model = fit_surrogate(s.data, s.ranking, {SurrogateKind::kRegressionTree, 0.0, 3});
  EXPECT_LE(model.depth(), 3u);
  EXPECT_LE(model.leaf_count(), 8u);
  EXPECT_GE(model.leaf_count(), 2u);
}

TEST(Surrogate, IdenticalRowsGiveAConstantModel) {
  DatasetBuilder b({"A", "B"});
  for (int i = 0; i < 5; ++i) b.add_row({"x", "y"});
  const Dataset data = b.build();
  const Ranking ranking = random_ranking(1, data);
  const SurrogateModel model = fit_surrogate(data, ranking);
  ASSERT_EQ(model.warnings().size(), 1u);
  EXPECT_NE(model.warnings()[0].find("fit-degenerate"), std::string::npos);
  EXPECT_DOUBLE_EQ(model.predict(data.row(0)), 3.0);
  const Background bg = make_background(data);
  for (double phi : shapley_values(model, data.row(2), bg, {})) EXPECT_EQ(phi, 0.0);
}

TEST(Background, SamplesLargeDatasets) {
  const Dataset data = random_dataset(2, 1000, {2, 3, 4, 2});
  const Background full = make_background(data, 2000, 9);
  EXPECT_FALSE(full.sampled);
  EXPECT_EQ(full.sample_size, 1000u);
  const Background small = make_background(data, 512, 9);
  EXPECT_TRUE(small.sampled);
  EXPECT_EQ(small.sample_size, 512u);
  double total = 0.0;
  for (double w : small.weights) total += w;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(make_background(data, 512, 9).rows, small.rows);
}

TEST(Shapley, LinearModelMatchesTheClosedForm) {
  const Dataset data = random_dataset(3, 120, {3, 2, 4, 2, 3, 2, 2, 3});
  const Ranking ranking = random_ranking(4, data);
  const SurrogateModel model = fit_surrogate(data, ranking);
  const Background bg = make_background(data);
  for (RowIndex r = 0; r < 10; ++r) {
    const auto phi = shapley_values(model, data.row(r), bg, {});
    const auto expected = testing::linear_closed_form(model, data.row(r), bg);
    for (std::size_t a = 0; a < phi.size(); ++a) EXPECT_NEAR(phi[a], expected[a], 1e-9);
  }
}

TEST(Shapley, EfficiencyInBothModes) {
  const Dataset data = random_dataset(5, 200, {3, 2, 4, 2, 3});
  const Ranking ranking = random_ranking(6, data);
  for (SurrogateKind kind : {SurrogateKind::kRidgeLinear, SurrogateKind::kRegressionTree}) {
    const SurrogateModel model = fit_surrogate(data, ranking, {kind, 1e-6, 6});
    const Background bg = make_background(data);
    const double base = background_mean(model, bg);
    for (RowIndex r = 0; r < 20; ++r) {
      for (ShapleyMode mode : {ShapleyMode::kExact, ShapleyMode::kMonteCarlo}) {
        const auto phi = shapley_values(model, data.row(r), bg, {mode, 50, 7}, r);
        const double sum = std::accumulate(phi.begin(), phi.end(), 0.0);
        EXPECT_NEAR(sum, model.predict(data.row(r)) - base, 1e-6);
      }
    }
  }
}

TEST(Shapley, UnusedAttributeGetsExactlyZero) {
  // A depth-1 tree splits on the driving attribute only.
  const auto inst = testing::ranked_by_attribute(8, 200, {2, 3, 3}, 0);
  const SurrogateModel model = fit_surrogate(inst.data, inst.ranking, {SurrogateKind::kRegressionTree, 0.0, 1});
  ASSERT_FALSE(model.tree()[0].leaf());
  ASSERT_EQ(model.tree()[0].attr, 0u);
  const Background bg = make_background(inst.data);
  for (RowIndex r = 0; r < 20; ++r) {
    const auto phi = shapley_values(model, inst.data.row(r), bg, {});
    EXPECT_EQ(phi[1], 0.0);
    EXPECT_EQ(phi[2], 0.0);
  }
}

TEST(Shapley, DuplicatedColumnsShareCredit) {
  const Dataset base = random_dataset(10, 150, {3, 2, 2});
  std::vector<Attribute> attrs = base.schema().attributes();
  attrs.push_back({"A0copy", attrs[0].domain});
  std::vector<Code> codes;
  for (RowIndex r = 0; r < base.n_rows(); ++r) {
    for (AttrIndex a = 0; a < 3; ++a) codes.push_back(base.at(r, a));
    codes.push_back(base.at(r, 0));
  }
  const Dataset data(Schema(std::move(attrs)), std::move(codes));
  const Ranking ranking = random_ranking(11, data);
  const SurrogateModel model = fit_surrogate(data, ranking);
  const Background bg = make_background(data);
  for (RowIndex r = 0; r < 10; ++r) {
    const auto phi = shapley_values(model, data.row(r), bg, {});
    EXPECT_NEAR(phi[0], phi[3], 1e-6);
  }
}

TEST(Shapley, MonteCarloConvergesToExact) {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (bool score_driven : {false, true}) {
      const auto c = testing::shapley_case(seed, score_driven);
      const SurrogateModel model = fit_surrogate(c.data, c.ranking, {SurrogateKind::kRegressionTree, 0.0, 6});
      const Background bg = make_background(c.data);
      for (RowIndex r = 0; r < 5; ++r) {
        const auto exact = shapley_values(model, c.data.row(r), bg, {});
        const auto mc = shapley_values(model, c.data.row(r), bg, {ShapleyMode::kMonteCarlo, 2000, seed}, r);
        double scale = 0.0;
        for (double v : exact) scale = std::max(scale, std::abs(v));
        for (std::size_t a = 0; a < exact.size(); ++a) {
          const double err = std::abs(mc[a] - exact[a]);
          worst = std::max(worst, err / (scale + 1e-9));
          EXPECT_LE(err, 0.05 * (scale + 1e-9)) << "seed " << seed << " row " << r << " attr " << a;
        }
      }
    }
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
}

TEST(Shapley, MonteCarloIsSeeded) {
  const Dataset data = random_dataset(14, 100, {3, 2, 4});
  const Ranking ranking = random_ranking(15, data);
  const SurrogateModel model = fit_surrogate(data, ranking, {SurrogateKind::kRegressionTree, 0.0, 4});
  const Background bg = make_background(data);
  const ShapleyConfig cfg{ShapleyMode::kMonteCarlo, 30, 5};
  EXPECT_EQ(shapley_values(model, data.row(3), bg, cfg, 3), shapley_values(model, data.row(3), bg, cfg, 3));
}

TEST(Shapley, ExactModeRejectsWideSchemas) {
  std::vector<std::size_t> cards(13, 2);
  const Dataset data = random_dataset(16, 60, cards);
  const Ranking ranking = random_ranking(17, data);
  const SurrogateModel model = fit_surrogate(data, ranking);
  const Background bg = make_background(data);
  try {
    shapley_values(model, data.row(0), bg, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kModeUnsupported);
  }
  EXPECT_EQ(shapley_values(model, data.row(0), bg, {ShapleyMode::kMonteCarlo, 10, 1}).size(), 13u);
}

TEST(Explain, WholeDatasetAveragesToZeroUnderALinearModel) {
  const Dataset data = random_dataset(18, 200, {3, 2, 4, 2});
  const Ranking ranking = random_ranking(19, data);
  const SurrogateModel model = fit_surrogate(data, ranking);
  const ShapleyReport report = explain_group(data, ranking, model, Pattern{}, 50);
  EXPECT_EQ(report.group_size, 200u);
  for (const auto& a : report.per_attribute) EXPECT_NEAR(a.value, 0.0, 1e-6);
}

TEST(Explain, GroupDefiningAttributeHasNoSpread) {
  const auto s = testing::students();
  const SurrogateModel model = fit_surrogate(s.data, s.ranking);
  const ShapleyReport report = explain_group(s.data, s.ranking, model, pat(s.data, "Address=U"), 5);
  EXPECT_EQ(report.group_size, 8u);
  EXPECT_NEAR(report.per_attribute[2].stddev, 0.0, 1e-9);
  EXPECT_NEAR(report.per_attribute[2].min, report.per_attribute[2].max, 1e-9);
  ASSERT_EQ(report.per_attribute.size(), 4u);
  ASSERT_EQ(report.histograms.size(), 4u);
  for (const auto& h : report.histograms) {
    EXPECT_NEAR(std::accumulate(h.group.begin(), h.group.end(), 0.0), 1.0, 1e-9);
    EXPECT_NEAR(std::accumulate(h.topk.begin(), h.topk.end(), 0.0), 1.0, 1e-9);
    for (double x : h.group) EXPECT_GE(x, 0.0);
  }
  // Every Address=U row has the same Address value.
  for (const auto& h : report.histograms) {
    if (h.attr == 2) EXPECT_DOUBLE_EQ(h.group[*s.data.schema().find_code(2, "U")], 1.0);
  }
}

TEST(Explain, DrivingAttributeRanksFirst) {
  const auto inst = testing::ranked_by_attribute(20, 400, {4, 3, 2, 3, 2}, 0);
  const BoundsSpec spec = BoundsSpec::global(20, 40, 60, {{40, 5}});
  const ResultSet rs = global_bounds(inst.data, inst.ranking, spec);
  const PatternSet& groups = rs.per_k.at(50);
  ASSERT_FALSE(groups.empty());
  const SurrogateModel model = fit_surrogate(inst.data, inst.ranking);

  // The largest detected group, and every detected group on the driver.
  std::vector<Pattern> checked;
  std::size_t largest = 0;
  Pattern biggest;
  for (const auto& [key, g] : groups) {
    std::size_t size = 0;
    for (RowIndex r = 0; r < inst.data.n_rows(); ++r) size += matches(inst.data.row(r), g) ? 1 : 0;
    if (size > largest) {
      largest = size;
      biggest = g;
    }
    if (g.assignments().front().attr == 0) checked.push_back(g);
  }
  checked.push_back(biggest);
  EXPECT_GE(checked.size(), 3u);
  for (const auto& g : checked) {
    const ShapleyReport report = explain_group(inst.data, inst.ranking, model, g, 50);
    EXPECT_EQ(report.by_magnitude.front(), 0u) << to_string(inst.data.schema(), g);
  }
}

TEST(Explain, EmptyGroupIsAnError) {
  const auto s = testing::students();
  const SurrogateModel model = fit_surrogate(s.data, s.ranking);
  // No male student from GP lives in a rural address with two failures.
  try {
    explain_group(s.data, s.ranking, model, pat(s.data, "Gender=M,School=GP,Failures=2,Address=R"), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGroup);
  }
}

}  // namespace
}  // namespace rankaudit
