#pragma once

#include <string>
#include <string_view>

#include "rankaudit/bounds.hpp"
#include "rankaudit/explain.hpp"
#include "rankaudit/result.hpp"

namespace rankaudit::io {

// Order of patterns within each k. Canonical is the pattern key order;
// size and deficit are descending with canonical tie-breaks.
enum class ReportSort { kCanonical, kSize, kDeficit };

ReportSort parse_sort(const std::string& text);
std::string_view to_string(ReportSort sort);

// JSON audit report: {mode, engine, spec, dataset_summary, per_k, stats}.
// Contains no timings, so equal inputs give byte-identical output.
std::string render_audit_report(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec,
                                const ResultSet& result, std::string_view engine,
                                ReportSort sort = ReportSort::kCanonical);

struct ParsedReport {
  std::string engine;
  BoundsSpec spec;
  std::size_t n_rows = 0;
  Schema schema;
  ResultSet result;  // patterns and node counts; wall_seconds stays 0
};

// Inverse of render_audit_report. Throws kMalformedReport.
ParsedReport parse_report(const std::string& text);

std::string render_explain_report(const Dataset& data, const SurrogateModel& model, const ShapleyReport& report);

// Delimited text with header attribute,value_label,group_proportion,topk_proportion.
std::string histograms_csv(const ShapleyReport& report);

}  // namespace rankaudit::io
