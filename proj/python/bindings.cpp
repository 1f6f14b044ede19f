#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "rankaudit/cli.hpp"
#include "rankaudit/error.hpp"
#include "rankaudit/explain.hpp"
#include "rankaudit/generators.hpp"
#include "rankaudit/global_bounds.hpp"
#include "rankaudit/io/ingest.hpp"
#include "rankaudit/io/report.hpp"
#include "rankaudit/oracle.hpp"
#include "rankaudit/prop_bounds.hpp"
#include "rankaudit/search.hpp"

namespace py = pybind11;
using namespace rankaudit;

namespace {

// Keeps the inputs alive next to the result so the report can be rendered later.
struct Audit {
  std::shared_ptr<const Dataset> data;
  std::shared_ptr<const Ranking> ranking;
  BoundsSpec spec;
  ResultSet result;
  std::string engine;

  std::map<std::size_t, std::vector<std::string>> per_k() const {
    std::map<std::size_t, std::vector<std::string>> out;
    for (const auto& [k, set] : result.per_k) {
      auto& v = out[k];
      for (const auto& [key, p] : set) v.push_back(to_string(data->schema(), p));
    }
    return out;
  }
};

std::shared_ptr<const Dataset> share(const Dataset& d) { return std::make_shared<const Dataset>(d); }
std::shared_ptr<const Ranking> share(const Ranking& r) { return std::make_shared<const Ranking>(r); }

Audit run(const Dataset& data, const Ranking& ranking, const BoundsSpec& spec, const std::string& engine) {
  validate_bounds(spec, data);
  Audit a{share(data), share(ranking), spec, {}, {}};
  if (engine == "baseline") {
    a.result = iter_td(data, ranking, spec);
    a.engine = "iter-td";
  } else if (engine == "oracle") {
    a.result = oracle_detect(data, ranking, spec);
    a.engine = "oracle";
  } else if (engine == "optimized") {
    const bool global = spec.mode == BoundMode::kGlobal;
    a.result = global ? global_bounds(data, ranking, spec) : prop_bounds(data, ranking, spec);
    a.engine = global ? "global-bounds" : "prop-bounds";
  } else {
    throw Error(ErrorCode::kParameter, "unknown engine '" + engine + "' (optimized, baseline, oracle)");
  }
  return a;
}

BoundsSpec global_spec(std::int64_t tau, std::size_t k_min, std::size_t k_max, const py::object& bounds) {
  std::vector<std::pair<std::size_t, std::int64_t>> steps;
  if (py::isinstance<py::int_>(bounds)) {
    steps = {{k_min, bounds.cast<std::int64_t>()}};
  } else {
    steps = bounds.cast<std::vector<std::pair<std::size_t, std::int64_t>>>();
  }
  return BoundsSpec::global(tau, k_min, k_max, steps);
}

}  // namespace

PYBIND11_MODULE(_rankaudit, m) {
  m.doc() = "Top-k representation audits of rankings over categorical data";

  py::register_exception<Error>(m, "RankAuditError", PyExc_ValueError);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows) {
             DatasetBuilder b(columns);
             for (const auto& r : rows) b.add_row(r);
             return b.build();
           }),
           py::arg("columns"), py::arg("rows"))
      .def_property_readonly("n_rows", &Dataset::n_rows)
      .def_property_readonly("attributes",
                             [](const Dataset& d) {
                               std::vector<std::string> names;
                               for (const auto& a : d.schema().attributes()) names.push_back(a.name);
                               return names;
                             })
      .def("domain", [](const Dataset& d, const std::string& name) {
        const auto a = d.schema().find(name);
        if (!a) throw py::key_error(name);
        return d.schema().attribute(*a).domain;
      })
      .def("__len__", &Dataset::n_rows);

  py::class_<Ranking>(m, "Ranking")
      .def_static("from_rank_column", &Ranking::from_rank_column, py::arg("data"), py::arg("ranks"))
      .def_static(
          "from_scores",
          [](const Dataset& data, const std::vector<double>& scores, bool higher_better) {
            std::vector<std::vector<double>> s;
            for (double x : scores) s.push_back({x});
            return Ranking::from_scores(data, s,
                                        {higher_better ? ScoreDirection::kHigherBetter : ScoreDirection::kLowerBetter});
          },
          py::arg("data"), py::arg("scores"), py::arg("higher_better") = true)
      .def_property_readonly("order", &Ranking::order)
      .def("position_of", &Ranking::position_of, py::arg("row"))
      .def("__len__", &Ranking::size);

  py::class_<Audit>(m, "Audit")
      .def_property_readonly("per_k", &Audit::per_k)
      .def_property_readonly("engine", [](const Audit& a) { return a.engine; })
      .def_property_readonly("evaluated", [](const Audit& a) { return a.result.total_evaluated(); })
      .def_property_readonly("generated", [](const Audit& a) { return a.result.total_generated(); })
      .def(
          "to_json",
          [](const Audit& a, const std::string& sort) {
            return io::render_audit_report(*a.data, *a.ranking, a.spec, a.result, a.engine, io::parse_sort(sort));
          },
          py::arg("sort") = "canonical");

  m.def(
      "ingest_csv",
      [](const std::string& path, std::optional<std::string> rank, std::vector<std::string> scores,
         std::vector<std::string> numeric, std::vector<std::string> ignore, std::size_t bins) {
        io::IngestConfig cfg;
        cfg.rank_column = std::move(rank);
        for (auto& s : scores) cfg.score_columns.push_back({std::move(s), ScoreDirection::kHigherBetter});
        cfg.numeric = std::move(numeric);
        cfg.ignore = std::move(ignore);
        cfg.bins = bins;
        io::Ingested in = io::ingest_csv(path, cfg);
        return py::make_tuple(in.data, in.ranking, in.warnings);
      },
      py::arg("path"), py::arg("rank") = py::none(), py::arg("scores") = std::vector<std::string>{},
      py::arg("numeric") = std::vector<std::string>{}, py::arg("ignore") = std::vector<std::string>{},
      py::arg("bins") = io::kDefaultBins, "Returns (dataset, ranking or None, warnings).");

  m.def(
      "audit_global",
      [](const Dataset& data, const Ranking& ranking, std::int64_t tau, std::size_t k_min, std::size_t k_max,
         const py::object& bounds, const std::string& engine) {
        return run(data, ranking, global_spec(tau, k_min, k_max, bounds), engine);
      },
      py::arg("data"), py::arg("ranking"), py::arg("tau"), py::arg("k_min"), py::arg("k_max"), py::arg("bounds"),
      py::arg("engine") = "optimized",
      "bounds is a flat L or a list of (from_k, L) steps; engine is optimized, baseline or oracle.");

  m.def(
      "audit_prop",
      [](const Dataset& data, const Ranking& ranking, std::int64_t tau, std::size_t k_min, std::size_t k_max,
         const std::string& alpha, const std::string& engine) {
        return run(data, ranking, BoundsSpec::proportional(tau, k_min, k_max, Fraction::parse(alpha)), engine);
      },
      py::arg("data"), py::arg("ranking"), py::arg("tau"), py::arg("k_min"), py::arg("k_max"), py::arg("alpha"),
      py::arg("engine") = "optimized", "alpha is a decimal or p/q string, parsed exactly.");

  m.def(
      "explain",
      [](const Dataset& data, const Ranking& ranking, const std::string& pattern, std::size_t k,
         const std::string& surrogate, const std::string& shapley, std::size_t permutations, std::uint64_t seed) {
        SurrogateParams params;
        if (surrogate == "regression-tree") {
          params.kind = SurrogateKind::kRegressionTree;
        } else if (surrogate != "ridge-linear") {
          throw Error(ErrorCode::kParameter, "unknown surrogate '" + surrogate + "'");
        }
        ExplainConfig config;
        if (shapley == "monte-carlo") {
          config.shapley.mode = ShapleyMode::kMonteCarlo;
        } else if (shapley != "exact") {
          throw Error(ErrorCode::kParameter, "unknown Shapley method '" + shapley + "'");
        }
        config.shapley.permutations = permutations;
        config.shapley.seed = seed;
        const SurrogateModel model = fit_surrogate(data, ranking, params);
        const ShapleyReport r = explain_group(data, ranking, model, parse_pattern(data.schema(), pattern), k, config);
        py::list attrs;
        for (AttrIndex a : r.by_magnitude) {
          const auto& s = r.per_attribute[a];
          py::dict d;
          d["attribute"] = s.name;
          d["value"] = s.value;
          d["min"] = s.min;
          d["max"] = s.max;
          d["stddev"] = s.stddev;
          attrs.append(d);
        }
        py::dict out;
        out["group_size"] = r.group_size;
        out["attributes"] = attrs;
        out["histograms_csv"] = io::histograms_csv(r);
        out["json"] = io::render_explain_report(data, model, r);
        return out;
      },
      py::arg("data"), py::arg("ranking"), py::arg("pattern"), py::arg("k"), py::arg("surrogate") = "ridge-linear",
      py::arg("shapley") = "exact", py::arg("permutations") = 2000, py::arg("seed") = 0,
      "Shapley values of a surrogate ranker averaged over the group, largest magnitude first.");

  m.def(
      "worst_case",
      [](std::size_t n) {
        WorstCaseInstance w = worst_case(n);
        return py::make_tuple(w.data, w.ranking, w.global_spec.size_threshold, w.global_spec.k_min,
                              w.global_spec.lower_bound(w.global_spec.k_min));
      },
      py::arg("n"), "Returns (dataset, ranking, tau, k, L).");

  m.def("random_dataset", &random_dataset, py::arg("seed"), py::arg("n_rows"), py::arg("cardinalities"));
  m.def("random_ranking", &random_ranking, py::arg("seed"), py::arg("data"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");
}
