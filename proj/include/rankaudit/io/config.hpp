#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankaudit/io/ingest.hpp"

namespace rankaudit::io {

// Settings read from a JSON config file. Every field is optional; command
// line flags take precedence. Relative paths (input, output, histograms)
// are resolved against the config file's directory. The format is described
// in README.md.
struct RunConfig {
  std::optional<std::string> input;
  IngestConfig ingest;

  std::optional<std::int64_t> tau;
  std::optional<std::size_t> k_min;
  std::optional<std::size_t> k_max;
  std::optional<std::vector<std::pair<std::size_t, std::int64_t>>> bounds;
  std::optional<std::string> alpha;  // decimal or p/q, parsed exactly
  std::optional<std::string> engine;
  std::optional<std::string> sort;

  std::optional<std::string> pattern;
  std::optional<std::size_t> k;
  std::optional<std::string> surrogate;  // ridge-linear | regression-tree
  std::optional<std::size_t> max_depth;
  std::optional<double> ridge_lambda;
  std::optional<std::string> shapley;  // exact | monte-carlo
  std::optional<std::size_t> permutations;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> background_rows;
  std::optional<std::size_t> top_attributes;
  std::optional<std::string> histograms;

  std::optional<std::string> output;
};

// Throws kMalformedConfig on bad JSON, unknown keys or wrongly typed values.
RunConfig parse_config(const std::string& text, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);

}  // namespace rankaudit::io
