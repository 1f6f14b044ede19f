#include "rankaudit/cli.hpp"

#include <ostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "rankaudit/error.hpp"
#include "rankaudit/explain.hpp"
#include "rankaudit/generators.hpp"
#include "rankaudit/global_bounds.hpp"
#include "rankaudit/io/config.hpp"
#include "rankaudit/io/report.hpp"
#include "rankaudit/oracle.hpp"
#include "rankaudit/prop_bounds.hpp"
#include "rankaudit/search.hpp"

namespace rankaudit {

namespace {

// Flag values; unset optionals fall back to the config file, then defaults.
struct Options {
  std::optional<std::string> input;
  std::optional<std::string> config;
  std::optional<std::string> output;
  std::optional<std::string> engine;
  std::optional<std::string> sort;
  std::optional<std::string> rank;
  std::vector<std::string> scores;
  std::vector<std::string> numeric;
  std::vector<std::string> categorical;
  std::vector<std::string> ignore;
  std::optional<std::size_t> bins;
  std::optional<std::int64_t> tau;
  std::optional<std::size_t> kmin;
  std::optional<std::size_t> kmax;
  std::optional<std::string> bounds;
  std::optional<std::string> alpha;
  std::optional<std::string> pattern;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> surrogate;
  std::optional<std::size_t> max_depth;
  std::optional<std::string> shapley;
  std::optional<std::size_t> permutations;
  std::optional<std::size_t> background_rows;
  std::optional<std::string> histograms;
  std::size_t n = 0;
  std::size_t rows = 500;
  std::size_t attributes = 6;
  std::size_t cap = kDefaultEnumerationCap;
};

template <typename T>
T pick(const std::optional<T>& flag, const std::optional<T>& config, const char* what) {
  if (flag) return *flag;
  if (config) return *config;
  throw Error(ErrorCode::kParameter, std::string("missing ") + what);
}

template <typename T>
T pick(const std::optional<T>& flag, const std::optional<T>& config, T fallback) {
  return flag ? *flag : config ? *config : fallback;
}

class Runner {
 public:
  Runner(const Options& opt, std::ostream& out, std::ostream& err) : opt_(opt), out_(out), err_(err) {
    if (opt_.config) cfg_ = io::load_config(*opt_.config);
  }

  void audit(BoundMode mode) {
    const io::Ingested in = load(true);
    const BoundsSpec spec = bounds(mode, in.data);
    const std::string engine = pick(opt_.engine, cfg_.engine, std::string("optimized"));
    ResultSet result;
    std::string name;
    if (engine == "baseline") {
      result = iter_td(in.data, *in.ranking, spec);
      name = "iter-td";
    } else if (engine == "optimized") {
      result = mode == BoundMode::kGlobal ? global_bounds(in.data, *in.ranking, spec)
                                          : prop_bounds(in.data, *in.ranking, spec);
      name = mode == BoundMode::kGlobal ? "global-bounds" : "prop-bounds";
    } else {
      throw Error(ErrorCode::kParameter, "unknown engine '" + engine + "' (baseline, optimized)");
    }
    emit(io::render_audit_report(in.data, *in.ranking, spec, result, name, sort()));
  }

  void oracle() {
    const io::Ingested in = load(true);
    const bool proportional = opt_.alpha || (!opt_.bounds && cfg_.alpha);
    const BoundsSpec spec = bounds(proportional ? BoundMode::kProportional : BoundMode::kGlobal, in.data);
    const ResultSet result = oracle_detect(in.data, *in.ranking, spec, opt_.cap);
    emit(io::render_audit_report(in.data, *in.ranking, spec, result, "oracle", sort()));
  }

  void explain() {
    const io::Ingested in = load(true);
    const Pattern p = parse_pattern(in.data.schema(), pick(opt_.pattern, cfg_.pattern, "--pattern"));
    const std::size_t k = pick(opt_.k, cfg_.k, "--k");

    SurrogateParams params;
    const std::string kind = pick(opt_.surrogate, cfg_.surrogate, std::string("ridge-linear"));
    if (kind == "regression-tree" || kind == "tree") {
      params.kind = SurrogateKind::kRegressionTree;
    } else if (kind != "ridge-linear" && kind != "linear") {
      throw Error(ErrorCode::kParameter, "unknown surrogate '" + kind + "' (ridge-linear, regression-tree)");
    }
    params.max_depth = pick(opt_.max_depth, cfg_.max_depth, params.max_depth);
    params.ridge_lambda = pick(std::optional<double>(), cfg_.ridge_lambda, params.ridge_lambda);

    ExplainConfig config;
    const std::string method = pick(opt_.shapley, cfg_.shapley, std::string("exact"));
    if (method == "monte-carlo" || method == "mc") {
      config.shapley.mode = ShapleyMode::kMonteCarlo;
    } else if (method != "exact") {
      throw Error(ErrorCode::kParameter, "unknown Shapley method '" + method + "' (exact, monte-carlo)");
    }
    config.shapley.permutations = pick(opt_.permutations, cfg_.permutations, std::size_t{2000});
    config.shapley.seed = pick(opt_.seed, cfg_.seed, std::uint64_t{0});
    config.background_rows = pick(opt_.background_rows, cfg_.background_rows, kDefaultBackgroundRows);
    config.top_attributes = pick(std::optional<std::size_t>(), cfg_.top_attributes, config.top_attributes);

    const SurrogateModel model = fit_surrogate(in.data, *in.ranking, params);
    const ShapleyReport report = explain_group(in.data, *in.ranking, model, p, k, config);
    if (const auto path = pick(opt_.histograms, cfg_.histograms, std::string()); !path.empty()) {
      io::write_file(path, io::histograms_csv(report));
    }
    emit(io::render_explain_report(in.data, model, report));
  }

  void gen_worstcase() {
    const WorstCaseInstance inst = worst_case(opt_.n);
    emit(io::format_csv(io::to_table(inst.data, &inst.ranking)));
  }

  void bench() {
    std::optional<io::Ingested> in;
    const std::uint64_t seed = pick(opt_.seed, cfg_.seed, std::uint64_t{7});
    if (opt_.input || cfg_.input) {
      in = load(true);
    } else {
      Dataset data = random_dataset(seed, opt_.rows, std::vector<std::size_t>(opt_.attributes, 2));
      Ranking ranking = random_ranking(seed + 1, data);
      in = io::Ingested{std::move(data), std::move(ranking), {}};
    }
    nlohmann::ordered_json j;
    j["mode"] = "bench";
    j["dataset_summary"] = {{"rows", in->data.n_rows()},
                            {"attributes", in->data.n_attributes()},
                            {"generated", !(opt_.input || cfg_.input)},
                            {"seed", seed}};
    for (BoundMode mode : {BoundMode::kGlobal, BoundMode::kProportional}) {
      const BoundsSpec spec = bounds(mode, in->data, true);
      const ResultSet base = iter_td(in->data, *in->ranking, spec);
      const ResultSet fast = mode == BoundMode::kGlobal ? global_bounds(in->data, *in->ranking, spec)
                                                        : prop_bounds(in->data, *in->ranking, spec);
      if (!same_patterns(base, fast)) throw Error(ErrorCode::kCacheCoherence, "engines disagree");
      const double b = static_cast<double>(base.total_evaluated());
      const double f = static_cast<double>(fast.total_evaluated());
      nlohmann::ordered_json spec_json{{"tau", spec.size_threshold}, {"k_min", spec.k_min}, {"k_max", spec.k_max}};
      if (mode == BoundMode::kGlobal) {
        spec_json["bound"] = spec.lower_bound(spec.k_min);
      } else {
        spec_json["alpha"] = spec.alpha.to_string();
      }
      j[std::string(to_string(mode))] = {{"spec", spec_json},
                                         {"baseline_evaluated", base.total_evaluated()},
                                         {"optimized_evaluated", fast.total_evaluated()},
                                         {"baseline_generated", base.total_generated()},
                                         {"optimized_generated", fast.total_generated()},
                                         {"pruning_percent", b > 0 ? 100.0 * (b - f) / b : 0.0}};
    }
    emit(j.dump(2) + "\n");
  }

 private:
  io::Ingested load(bool need_ranking) {
    io::IngestConfig ic = cfg_.ingest;
    if (opt_.rank && !opt_.scores.empty()) throw Error(ErrorCode::kParameter, "--rank and --score are exclusive");
    if (opt_.rank) {
      ic.rank_column = opt_.rank;
      ic.score_columns.clear();
    }
    if (!opt_.scores.empty()) {
      ic.rank_column.reset();
      ic.score_columns.clear();
      for (const auto& s : opt_.scores) {
        io::ScoreColumn sc{s, ScoreDirection::kHigherBetter};
        if (const auto colon = s.rfind(':'); colon != std::string::npos) {
          const std::string dir = s.substr(colon + 1);
          if (dir != "higher" && dir != "lower") throw Error(ErrorCode::kParameter, "score direction in '" + s + "'");
          sc.name = s.substr(0, colon);
          sc.direction = dir == "lower" ? ScoreDirection::kLowerBetter : ScoreDirection::kHigherBetter;
        }
        ic.score_columns.push_back(sc);
      }
    }
    if (!opt_.numeric.empty()) ic.numeric = opt_.numeric;
    if (!opt_.categorical.empty()) ic.categorical = opt_.categorical;
    if (!opt_.ignore.empty()) ic.ignore = opt_.ignore;
    if (opt_.bins) ic.bins = *opt_.bins;
    ic.require_ranking = need_ranking;
    io::Ingested in = io::ingest_csv(pick(opt_.input, cfg_.input, "--input"), ic);
    for (const auto& w : in.warnings) err_ << "warning: " << w << "\n";
    return in;
  }

  BoundsSpec bounds(BoundMode mode, const Dataset& data, bool bench = false) {
    const std::int64_t tau = bench ? pick(opt_.tau, cfg_.tau, std::int64_t{10}) : pick(opt_.tau, cfg_.tau, "--tau");
    const std::size_t kmin = bench ? pick(opt_.kmin, cfg_.k_min, std::size_t{10}) : pick(opt_.kmin, cfg_.k_min, "--kmin");
    const std::size_t kmax = bench ? pick(opt_.kmax, cfg_.k_max, std::size_t{49}) : pick(opt_.kmax, cfg_.k_max, "--kmax");
    BoundsSpec spec;
    if (mode == BoundMode::kGlobal) {
      std::vector<std::pair<std::size_t, std::int64_t>> steps;
      if (opt_.bounds) {
        steps = parse_steps(*opt_.bounds, kmin);
      } else if (cfg_.bounds) {
        steps = *cfg_.bounds;
      } else if (bench) {
        steps = {{kmin, 5}};
      } else {
        throw Error(ErrorCode::kParameter, "missing --bounds");
      }
      spec = BoundsSpec::global(tau, kmin, kmax, steps);
    } else {
      const std::string alpha = bench ? pick(opt_.alpha, cfg_.alpha, std::string("0.8")) : pick(opt_.alpha, cfg_.alpha, "--alpha");
      spec = BoundsSpec::proportional(tau, kmin, kmax, Fraction::parse(alpha));
    }
    validate_bounds(spec, data);
    return spec;
  }

  io::ReportSort sort() const { return io::parse_sort(pick(opt_.sort, cfg_.sort, std::string("canonical"))); }

  void emit(const std::string& content) {
    const std::string path = pick(opt_.output, cfg_.output, std::string("-"));
    if (path == "-") {
      out_ << content << std::flush;
    } else {
      io::write_file(path, content);
    }
  }

  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
  io::RunConfig cfg_;
};

void add_input(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "CSV file with a header row");
  cmd->add_option("--config", o.config, "JSON config file");
  cmd->add_option("--rank", o.rank, "rank column (1 = best)");
  cmd->add_option("--score", o.scores, "score column, NAME or NAME:lower; repeat for tie-breakers");
  cmd->add_option("--numeric", o.numeric, "numeric column to bucketize");
  cmd->add_option("--categorical", o.categorical, "categorical column");
  cmd->add_option("--ignore", o.ignore, "column to drop");
  cmd->add_option("--bins", o.bins, "buckets per numeric column (default 4)");
  cmd->add_option("--output", o.output, "output file (default standard output)");
}

void add_range(CLI::App* cmd, Options& o) {
  cmd->add_option("--tau", o.tau, "minimum group size");
  cmd->add_option("--kmin", o.kmin, "first k");
  cmd->add_option("--kmax", o.kmax, "last k");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detects under-represented groups in the top-k of a ranking and explains them."};
  app.name("rankaudit");
  app.require_subcommand(1);
  Options o;

  auto* global = app.add_subcommand("audit-global", "most general groups below a global lower bound L_k");
  add_input(global, o);
  add_range(global, o);
  global->add_option("--bounds", o.bounds, "lower bounds as 'L' or 'from_k:L,from_k:L'");
  global->add_option("--engine", o.engine, "optimized (default) or baseline");
  global->add_option("--sort", o.sort, "canonical (default), size or deficit");

  auto* prop = app.add_subcommand("audit-prop", "most general groups below alpha * share of the top-k");
  add_input(prop, o);
  add_range(prop, o);
  prop->add_option("--alpha", o.alpha, "proportionality factor, e.g. 0.9 or 9/10");
  prop->add_option("--engine", o.engine, "optimized (default) or baseline");
  prop->add_option("--sort", o.sort, "canonical (default), size or deficit");

  auto* oracle = app.add_subcommand("oracle", "brute-force detection over every pattern (small inputs)");
  add_input(oracle, o);
  add_range(oracle, o);
  auto* ob = oracle->add_option("--bounds", o.bounds, "global lower bounds");
  oracle->add_option("--alpha", o.alpha, "proportional factor")->excludes(ob);
  oracle->add_option("--sort", o.sort, "canonical (default), size or deficit");
  oracle->add_option("--cap", o.cap, "largest pattern space to enumerate");

  auto* explain = app.add_subcommand("explain", "Shapley values of a surrogate ranker for one group");
  add_input(explain, o);
  explain->add_option("--pattern", o.pattern, "group as 'Attr=Value,Attr=Value'");
  explain->add_option("--k", o.k, "top-k prefix for the histograms");
  explain->add_option("--seed", o.seed, "seed for background sampling and Monte Carlo");
  explain->add_option("--surrogate", o.surrogate, "ridge-linear (default) or regression-tree");
  explain->add_option("--max-depth", o.max_depth, "regression tree depth (default 6)");
  explain->add_option("--shapley", o.shapley, "exact (default) or monte-carlo");
  explain->add_option("--permutations", o.permutations, "Monte Carlo permutations (default 2000)");
  explain->add_option("--background-rows", o.background_rows, "background sample size (default 512)");
  explain->add_option("--histograms", o.histograms, "write value histograms as CSV to this file");

  auto* gen = app.add_subcommand("gen-worstcase", "adversarial dataset with C(n, n/2) most general violators");
  gen->add_option("--n", o.n, "number of binary attributes (even)")->required();
  gen->add_option("--output", o.output, "output file (default standard output)");

  auto* bench = app.add_subcommand("bench", "node evaluations of baseline and optimized engines");
  add_input(bench, o);
  add_range(bench, o);
  bench->add_option("--bounds", o.bounds, "global lower bounds (default 5)");
  bench->add_option("--alpha", o.alpha, "proportional factor (default 0.8)");
  bench->add_option("--seed", o.seed, "seed of the generated dataset (default 7)");
  bench->add_option("--rows", o.rows, "rows of the generated dataset (default 500)");
  bench->add_option("--attributes", o.attributes, "binary attributes of the generated dataset (default 6)");

  std::vector<std::string> argv{"rankaudit"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::vector<const char*> ptrs;
  for (const auto& a : argv) ptrs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    Runner run(o, out, err);
    if (global->parsed()) run.audit(BoundMode::kGlobal);
    if (prop->parsed()) run.audit(BoundMode::kProportional);
    if (oracle->parsed()) run.oracle();
    if (explain->parsed()) run.explain();
    if (gen->parsed()) run.gen_worstcase();
    if (bench->parsed()) run.bench();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kIo ? kExitIo : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace rankaudit
