#include "rankaudit/io/report.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "rankaudit/error.hpp"
#include "rankaudit/io/csv.hpp"

namespace rankaudit::io {

using Json = nlohmann::ordered_json;

ReportSort parse_sort(const std::string& text) {
  if (text == "canonical") return ReportSort::kCanonical;
  if (text == "size") return ReportSort::kSize;
  if (text == "deficit") return ReportSort::kDeficit;
  throw Error(ErrorCode::kParameter, "unknown sort '" + text + "' (canonical, size, deficit)");
}

std::string_view to_string(ReportSort sort) {
  switch (sort) {
    case ReportSort::kSize: return "size";
    case ReportSort::kDeficit: return "deficit";
    default: return "canonical";
  }
}

namespace {

Json assignments_json(const Schema& schema, const Pattern& p) {
  Json out = Json::array();
  for (const auto& [attr, code] : p.assignments()) {
    const Attribute& a = schema.attribute(attr);
    out.push_back({{"attribute", a.name}, {"value", a.domain.at(code)}, {"attr", attr}, {"code", code}});
  }
  return out;
}

// Step list [[from_k, L], ...] with one entry per change of L.
Json steps_json(const BoundsSpec& spec) {
  Json steps = Json::array();
  std::int64_t last = -1;
  for (const auto& [k, bound] : spec.lower_schedule) {
    if (k < spec.k_min || k > spec.k_max || bound == last) continue;
    steps.push_back(Json::array({k, bound}));
    last = bound;
  }
  return steps;
}

Json spec_json(const BoundsSpec& spec) {
  Json out{{"mode", to_string(spec.mode)}, {"tau", spec.size_threshold}, {"k_min", spec.k_min}, {"k_max", spec.k_max}};
  if (spec.mode == BoundMode::kGlobal) {
    out["bounds"] = steps_json(spec);
  } else {
    out["alpha"] = spec.alpha.to_string();
  }
  return out;
}

struct Row {
  const Pattern* pattern;
  std::int64_t size;
  std::int64_t topk;
  double bound;
};

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kMalformedReport, std::string("missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedReport, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string render_audit_report(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec,
                                const ResultSet& result, std::string_view engine, ReportSort sort) {
  const BoundTest test(spec, data.n_rows());
  Json report;
  report["mode"] = to_string(spec.mode);
  report["engine"] = engine;
  report["spec"] = spec_json(spec);

  Json attrs = Json::array();
  for (const auto& a : data.schema().attributes()) attrs.push_back({{"name", a.name}, {"domain", a.domain}});
  report["dataset_summary"] = {
      {"rows", data.n_rows()},
      {"ranking", ranking.source() == RankingSource::kExplicitRankColumn ? "rank-column" : "scores"},
      {"attributes", attrs}};

  Json per_k = Json::array();
  for (const auto& [k, set] : result.per_k) {
    std::vector<Row> rows;
    const auto prefix = ranking.prefix(k);
    for (const auto& [key, p] : set) {
      Row row{&p, 0, 0, 0.0};
      for (RowIndex r = 0; r < data.n_rows(); ++r) row.size += matches(data.row(r), p) ? 1 : 0;
      for (RowIndex r : prefix) row.topk += matches(data.row(r), p) ? 1 : 0;
      row.bound = test.bound_value(row.size, k);
      rows.push_back(row);
    }
    if (sort == ReportSort::kSize) {
      std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.size > b.size; });
    } else if (sort == ReportSort::kDeficit) {
      std::stable_sort(rows.begin(), rows.end(),
                       [](const Row& a, const Row& b) { return a.bound - a.topk > b.bound - b.topk; });
    }
    Json patterns = Json::array();
    for (const Row& row : rows) {
      patterns.push_back({{"pattern", to_string(data.schema(), *row.pattern)},
                          {"assignments", assignments_json(data.schema(), *row.pattern)},
                          {"size_in_D", row.size},
                          {"topk_count", row.topk},
                          {"bound", row.bound},
                          {"deficit", row.bound - static_cast<double>(row.topk)}});
    }
    Json entry{{"k", k}};
    if (spec.mode == BoundMode::kGlobal) {
      entry["bound"] = spec.lower_bound(k);
    } else {
      // alpha * k / n, the bound per member of a group
      entry["bound"] = Fraction::make(spec.alpha.num * static_cast<std::int64_t>(k),
                                      spec.alpha.den * static_cast<std::int64_t>(data.n_rows()))
                           .to_string();
    }
    entry["patterns"] = std::move(patterns);
    per_k.push_back(std::move(entry));
  }
  report["per_k"] = std::move(per_k);

  Json stats_k = Json::array();
  for (const auto& [k, s] : result.stats) stats_k.push_back({{"k", k}, {"generated", s.generated}, {"evaluated", s.evaluated}});
  report["stats"] = {{"total_generated", result.total_generated()},
                     {"total_evaluated", result.total_evaluated()},
                     {"per_k", stats_k}};
  return report.dump(2) + "\n";
}

ParsedReport parse_report(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedReport, e.what());
  }
  ParsedReport out;
  out.engine = get<std::string>(j, "engine");
  const Json spec = get<Json>(j, "spec");
  const auto mode = get<std::string>(spec, "mode");
  const auto tau = get<std::int64_t>(spec, "tau");
  const auto k_min = get<std::size_t>(spec, "k_min");
  const auto k_max = get<std::size_t>(spec, "k_max");
  if (mode == "global") {
    out.spec = BoundsSpec::global(tau, k_min, k_max,
                                  get<std::vector<std::pair<std::size_t, std::int64_t>>>(spec, "bounds"));
  } else if (mode == "proportional") {
    out.spec = BoundsSpec::proportional(tau, k_min, k_max, Fraction::parse(get<std::string>(spec, "alpha")));
  } else {
    throw Error(ErrorCode::kMalformedReport, "unknown mode '" + mode + "'");
  }

  const Json summary = get<Json>(j, "dataset_summary");
  out.n_rows = get<std::size_t>(summary, "rows");
  std::vector<Attribute> attrs;
  for (const Json& a : get<Json>(summary, "attributes")) {
    attrs.push_back({get<std::string>(a, "name"), get<std::vector<std::string>>(a, "domain")});
  }
  out.schema = Schema(std::move(attrs));

  for (const Json& entry : get<Json>(j, "per_k")) {
    PatternSet& set = out.result.per_k[get<std::size_t>(entry, "k")];
    for (const Json& p : get<Json>(entry, "patterns")) {
      std::vector<Assignment> assignments;
      for (const Json& a : get<Json>(p, "assignments")) {
        assignments.push_back({get<AttrIndex>(a, "attr"), get<Code>(a, "code")});
      }
      Pattern pattern(std::move(assignments));
      validate_pattern(pattern, out.schema);
      set.insert(pattern);
    }
  }
  for (const Json& s : get<Json>(get<Json>(j, "stats"), "per_k")) {
    KStats& st = out.result.stats[get<std::size_t>(s, "k")];
    st.generated = get<std::size_t>(s, "generated");
    st.evaluated = get<std::size_t>(s, "evaluated");
  }
  return out;
}

std::string render_explain_report(const Dataset& data, const SurrogateModel& model, const ShapleyReport& report) {
  Json out;
  out["mode"] = "explain";
  std::size_t size = 0;
  for (RowIndex r = 0; r < data.n_rows(); ++r) size += matches(data.row(r), report.group) ? 1 : 0;
  out["group"] = {{"pattern", to_string(data.schema(), report.group)},
                  {"assignments", assignments_json(data.schema(), report.group)},
                  {"size_in_D", size}};
  out["k"] = report.k;
  // Shapley values are in rank positions: negative values push rows toward the top.
  out["target"] = "rank-position";
  out["model"] = {{"kind", to_string(report.model_kind)},
                  {"training_mse", report.model_mse},
                  {"baseline_mse", model.baseline_mse()},
                  {"warnings", model.warnings()}};
  out["shapley"] = {{"method", report.shapley.mode == ShapleyMode::kExact ? "exact" : "monte-carlo"},
                    {"permutations", report.shapley.permutations},
                    {"seed", report.shapley.seed}};
  out["background"] = {{"size", report.background_size},
                       {"sampled", report.background_sampled},
                       {"seed", report.shapley.seed}};
  Json attrs = Json::array();
  for (AttrIndex a : report.by_magnitude) {
    const AttributeShapley& s = report.per_attribute[a];
    attrs.push_back({{"attribute", s.name},
                     {"value", s.value},
                     {"magnitude", std::abs(s.value)},
                     {"min", s.min},
                     {"max", s.max},
                     {"stddev", s.stddev}});
  }
  out["attributes"] = std::move(attrs);
  Json hists = Json::array();
  for (const Histogram& h : report.histograms) {
    Json values = Json::array();
    for (std::size_t c = 0; c < h.labels.size(); ++c) {
      values.push_back({{"label", h.labels[c]}, {"group", h.group[c]}, {"topk", h.topk[c]}});
    }
    hists.push_back({{"attribute", h.name}, {"values", std::move(values)}});
  }
  out["histograms"] = std::move(hists);
  return out.dump(2) + "\n";
}

std::string histograms_csv(const ShapleyReport& report) {
  CsvTable table;
  table.header = {"attribute", "value_label", "group_proportion", "topk_proportion"};
  for (const Histogram& h : report.histograms) {
    for (std::size_t c = 0; c < h.labels.size(); ++c) {
      table.rows.push_back({h.name, h.labels[c], Json(h.group[c]).dump(), Json(h.topk[c]).dump()});
    }
  }
  return format_csv(table);
}

}  // namespace rankaudit::io
