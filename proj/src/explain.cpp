#include "rankaudit/explain.hpp"

#include <algorithm>
#include <cmath>

#include "rankaudit/error.hpp"

namespace rankaudit {

Histogram value_histogram(const Dataset& data, AttrIndex attr, const std::vector<RowIndex>& group,
                          std::span<const RowIndex> topk) {
  const Attribute& a = data.schema().attribute(attr);
  Histogram h{attr, a.name, a.domain, std::vector<double>(a.domain.size(), 0.0),
              std::vector<double>(a.domain.size(), 0.0)};
  for (RowIndex r : group) h.group[data.at(r, attr)] += 1.0;
  for (RowIndex r : topk) h.topk[data.at(r, attr)] += 1.0;
  for (double& x : h.group) x /= static_cast<double>(group.size());
  for (double& x : h.topk) x /= static_cast<double>(topk.size());
  return h;
}

ShapleyReport explain_group(const Dataset& data, const Ranking& ranking, const SurrogateModel& model, const Pattern& p,
                            std::size_t k, const ExplainConfig& config) {
  validate_pattern(p, data.schema());
  if (k < 1 || k > data.n_rows()) {
    throw Error(ErrorCode::kRangeError, "k=" + std::to_string(k) + " outside 1.." + std::to_string(data.n_rows()));
  }
  std::vector<RowIndex> members;
  for (RowIndex r = 0; r < data.n_rows(); ++r) {
    if (matches(data.row(r), p)) members.push_back(r);
  }
  if (members.empty()) throw Error(ErrorCode::kEmptyGroup, "no row satisfies " + to_string(data.schema(), p));

  const Background background = make_background(data, config.background_rows, config.shapley.seed);
  const std::size_t m = data.n_attributes();
  std::vector<std::vector<double>> values;
  values.reserve(members.size());
  for (RowIndex r : members) values.push_back(shapley_values(model, data.row(r), background, config.shapley, r));

  ShapleyReport report;
  report.group = p;
  report.k = k;
  report.group_size = members.size();
  report.model_kind = model.kind();
  report.model_mse = model.training_mse();
  report.shapley = config.shapley;
  report.background_size = background.sample_size;
  report.background_sampled = background.sampled;

  for (AttrIndex a = 0; a < m; ++a) {
    AttributeShapley s{a, data.schema().attribute(a).name, 0.0, values[0][a], values[0][a], 0.0};
    for (const auto& v : values) {
      s.value += v[a];
      s.min = std::min(s.min, v[a]);
      s.max = std::max(s.max, v[a]);
    }
    s.value /= static_cast<double>(values.size());
    double var = 0.0;
    for (const auto& v : values) var += (v[a] - s.value) * (v[a] - s.value);
    s.stddev = std::sqrt(var / static_cast<double>(values.size()));
    report.per_attribute.push_back(std::move(s));
  }

  report.by_magnitude.resize(m);
  for (AttrIndex a = 0; a < m; ++a) report.by_magnitude[a] = a;
  std::stable_sort(report.by_magnitude.begin(), report.by_magnitude.end(), [&](AttrIndex x, AttrIndex y) {
    return std::abs(report.per_attribute[x].value) > std::abs(report.per_attribute[y].value);
  });

  const auto topk = ranking.prefix(k);
  const std::size_t shown = std::min(config.top_attributes, m);
  for (std::size_t i = 0; i < shown; ++i) {
    report.histograms.push_back(value_histogram(data, report.by_magnitude[i], members, topk));
  }
  return report;
}

}  // namespace rankaudit
