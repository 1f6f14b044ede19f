#pragma once

#include <string>
#include <vector>

#include "rankaudit/pattern.hpp"
#include "rankaudit/shapley.hpp"

namespace rankaudit {

struct ExplainConfig {
  ShapleyConfig shapley;
  std::size_t background_rows = kDefaultBackgroundRows;
  std::size_t top_attributes = 6;  // attributes that get histograms
};

struct AttributeShapley {
  AttrIndex attr = 0;
  std::string name;
  double value = 0.0;  // mean over the group's rows
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;
};

// Value distribution of one attribute: proportions over its domain for the
// group and for the top-k rows.
struct Histogram {
  AttrIndex attr = 0;
  std::string name;
  std::vector<std::string> labels;
  std::vector<double> group;
  std::vector<double> topk;
};

struct ShapleyReport {
  Pattern group;
  std::size_t k = 0;
  std::size_t group_size = 0;
  SurrogateKind model_kind = SurrogateKind::kRidgeLinear;
  double model_mse = 0.0;
  ShapleyConfig shapley;
  std::size_t background_size = 0;
  bool background_sampled = false;
  std::vector<AttributeShapley> per_attribute;  // schema order
  std::vector<AttrIndex> by_magnitude;          // attributes by |value|, largest first
  std::vector<Histogram> histograms;            // for the leading attributes of by_magnitude
};

// Explains why the group defined by p is placed where it is: Shapley values
// of the surrogate for every member, averaged per attribute, plus value
// histograms of the group against the top-k.
ShapleyReport explain_group(const Dataset& data, const Ranking& ranking, const SurrogateModel& model, const Pattern& p,
                            std::size_t k, const ExplainConfig& config = {});

Histogram value_histogram(const Dataset& data, AttrIndex attr, const std::vector<RowIndex>& group,
                          std::span<const RowIndex> topk);

}  // namespace rankaudit
