#include "rankaudit/io/config.hpp"

#include <filesystem>
#include <set>

#include "json.hpp"
#include "rankaudit/error.hpp"
#include "rankaudit/io/csv.hpp"

namespace rankaudit::io {

using Json = nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kMalformedConfig, what); }

void check_keys(const Json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) bad("'" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) bad("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const Json& obj, const char* key, std::optional<T>& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    bad(std::string("key '") + key + "' has the wrong type");
  }
}

template <typename T>
void read(const Json& obj, const char* key, T& out) {
  std::optional<T> v;
  read(obj, key, v);
  if (v) out = std::move(*v);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(e.what());
  }
  check_keys(j, "config", {"input", "columns", "audit", "explain", "output"});
  RunConfig cfg;
  read(j, "input", cfg.input);
  read(j, "output", cfg.output);

  if (j.contains("columns")) {
    const Json& c = j["columns"];
    check_keys(c, "columns", {"categorical", "numeric", "bins", "rank", "scores", "ignore"});
    IngestConfig& in = cfg.ingest;
    read(c, "categorical", in.categorical);
    read(c, "numeric", in.numeric);
    read(c, "bins", in.bins);
    read(c, "rank", in.rank_column);
    read(c, "ignore", in.ignore);
    if (c.contains("scores")) {
      if (!c["scores"].is_array()) bad("'columns.scores' must be a list");
      for (const Json& s : c["scores"]) {
        ScoreColumn sc;
        if (s.is_string()) {
          sc.name = s.get<std::string>();
        } else {
          check_keys(s, "columns.scores", {"name", "direction"});
          std::optional<std::string> name;
          std::string direction = "higher";
          read(s, "name", name);
          read(s, "direction", direction);
          if (!name) bad("score column without a name");
          sc.name = *name;
          if (direction == "lower") {
            sc.direction = ScoreDirection::kLowerBetter;
          } else if (direction != "higher") {
            bad("score direction must be 'higher' or 'lower'");
          }
        }
        in.score_columns.push_back(std::move(sc));
      }
    }
  }

  if (j.contains("audit")) {
    const Json& a = j["audit"];
    check_keys(a, "audit", {"tau", "k_min", "k_max", "bounds", "alpha", "engine", "sort"});
    read(a, "tau", cfg.tau);
    read(a, "k_min", cfg.k_min);
    read(a, "k_max", cfg.k_max);
    read(a, "bounds", cfg.bounds);
    if (a.contains("alpha") && !a["alpha"].is_string()) bad("'audit.alpha' must be a string such as \"0.9\"");
    read(a, "alpha", cfg.alpha);
    read(a, "engine", cfg.engine);
    read(a, "sort", cfg.sort);
  }

  if (j.contains("explain")) {
    const Json& e = j["explain"];
    check_keys(e, "explain",
               {"pattern", "k", "surrogate", "max_depth", "ridge_lambda", "shapley", "permutations", "seed",
                "background_rows", "top_attributes", "histograms"});
    read(e, "pattern", cfg.pattern);
    read(e, "k", cfg.k);
    read(e, "surrogate", cfg.surrogate);
    read(e, "max_depth", cfg.max_depth);
    read(e, "ridge_lambda", cfg.ridge_lambda);
    read(e, "shapley", cfg.shapley);
    read(e, "permutations", cfg.permutations);
    read(e, "seed", cfg.seed);
    read(e, "background_rows", cfg.background_rows);
    read(e, "top_attributes", cfg.top_attributes);
    read(e, "histograms", cfg.histograms);
  }

  for (auto* path : {&cfg.input, &cfg.output, &cfg.histograms}) {
    if (*path && !base_dir.empty() && **path != "-" && std::filesystem::path(**path).is_relative()) {
      *path = (std::filesystem::path(base_dir) / **path).string();
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_file(path), std::filesystem::path(path).parent_path().string());
}

}  // namespace rankaudit::io
