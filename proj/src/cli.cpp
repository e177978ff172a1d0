#include "mtssel/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtssel/csv.hpp"
#include "mtssel/dataset.hpp"
#include "mtssel/distance.hpp"
#include "mtssel/errors.hpp"
#include "mtssel/eval.hpp"
#include "mtssel/graph.hpp"
#include "mtssel/parallel.hpp"
#include "mtssel/pipeline.hpp"
#include "mtssel/ranker.hpp"
#include "mtssel/select.hpp"
#include "mtssel/synthetic.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace mtssel::cli {

namespace {

struct CommonConfig {
  std::string data;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string cache_dir;
  bool no_cache = false;
  double train_fraction = 0.5;
  std::optional<std::size_t> dtw_window;
  bool znorm = false;
};

void add_common(CLI::App* app, CommonConfig& c) {
  app->add_option("--data", c.data, "Dataset directory")->required();
  app->add_option("--seed", c.seed, "Root seed for every stochastic stage");
  app->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--cache-dir", c.cache_dir, "Distance cache directory (default: $MTS_SELECT_CACHE or ./cache)");
  app->add_flag("--no-cache", c.no_cache, "Do not read or write the distance cache");
  app->add_option("--train-fraction", c.train_fraction, "Stratified train fraction when the dataset has no split.csv");
  app->add_option("--dtw-window", c.dtw_window, "Sakoe-Chiba half width (default: unconstrained)");
  app->add_flag("--znorm", c.znorm, "z-normalize each series before DTW");
}

std::string resolve_cache_dir(const CommonConfig& c) {
  if (!c.cache_dir.empty()) return c.cache_dir;
  if (const char* env = std::getenv("MTS_SELECT_CACHE"); env && *env) return env;
  return "cache";
}

Json common_json(const CommonConfig& c) {
  Json j;
  j["data"] = c.data;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["cache_dir"] = c.no_cache ? Json(nullptr) : Json(resolve_cache_dir(c));
  j["train_fraction"] = c.train_fraction;
  j["dtw_window"] = c.dtw_window ? Json(*c.dtw_window) : Json(nullptr);
  j["znorm"] = c.znorm;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot write");
  out << text;
}

void write_run_json(const fs::path& dir, const std::string& command, Json config) {
  Json run;
  run["command"] = command;
  run["config"] = std::move(config);
  write_text(dir / "run.json", run.dump(2) + "\n");
}

// Loads the dataset, applies the split and computes full distance matrices.
struct Prepared {
  Dataset dataset;
  std::vector<DistanceMatrix> distances; // over all segments
};

Prepared prepare(const CommonConfig& c) {
  set_num_threads(c.threads);
  Dataset d = load_dataset(c.data);
  if (d.test_ids.empty()) d = split(d, c.train_fraction, c.seed);
  DistanceOptions opts{c.dtw_window, c.znorm};
  std::optional<DistanceCache> cache;
  if (!c.no_cache) cache.emplace(resolve_cache_dir(c));
  auto distances = all_distance_matrices(d, opts, cache ? &*cache : nullptr);
  return {std::move(d), std::move(distances)};
}

struct RankConfig {
  std::size_t knn = 10;
  std::optional<double> pie_epsilon;
  std::size_t pie_max_iter = 1000;
  std::string out = ".";
};

int cmd_rank(const CommonConfig& c, const RankConfig& rc) {
  auto p = prepare(c);
  const auto train = restrict_all(p.distances, p.dataset.train_ids);
  const auto labels = p.dataset.label_indices(p.dataset.train_ids);
  RankOptions opts;
  opts.knn_k = rc.knn;
  opts.pie.epsilon = rc.pie_epsilon;
  opts.pie.max_iter = rc.pie_max_iter;
  opts.seed = c.seed;
  const auto result = pie_rank(train, labels, static_cast<int>(p.dataset.num_classes()), opts);

  std::vector<std::size_t> rank_of(result.scores.size());
  for (std::size_t r = 0; r < result.order.size(); ++r) rank_of[result.order[r]] = r + 1;
  std::string text = "feature_id,name,score,rank\n";
  for (std::size_t j = 0; j < result.scores.size(); ++j)
    text += std::to_string(j) + "," + csv::quote(p.dataset.descriptors[j].name) + "," + csv::format_double(result.scores[j]) +
            "," + std::to_string(rank_of[j]) + "\n";
  const fs::path out(rc.out);
  write_text(out / "scores.csv", text);

  Json config = common_json(c);
  config["knn"] = rc.knn;
  config["pie_epsilon"] = rc.pie_epsilon ? Json(*rc.pie_epsilon) : Json(nullptr);
  config["pie_max_iter"] = rc.pie_max_iter;
  config["out"] = rc.out;
  write_run_json(out, "rank", config);

  for (std::size_t r = 0; r < result.order.size(); ++r) {
    const auto j = result.order[r];
    std::cout << r + 1 << '\t' << p.dataset.descriptors[j].name << '\t' << csv::format_double(result.scores[j]) << '\n';
  }
  return 0;
}

struct SelectConfig {
  std::size_t knn = 10;
  std::optional<double> lambda;
  std::optional<std::size_t> target_size;
  double beta = 1.0;
  std::string penalty = "cmi";
  std::optional<std::size_t> nystrom;
  std::optional<double> pie_epsilon;
  std::size_t pie_max_iter = 1000;
  std::size_t max_sweeps = 10000;
  double tol = 1e-8;
  std::string dump_redundancy;
  std::string out = ".";
};

int cmd_select(const CommonConfig& c, const SelectConfig& sc) {
  if (sc.lambda.has_value() == sc.target_size.has_value()) throw ParameterError("select: give exactly one of --lambda or --target-size");
  SelectOptions opts;
  opts.knn_k = sc.knn;
  opts.lambda = sc.lambda;
  opts.target_size = sc.target_size;
  opts.beta = sc.beta;
  opts.penalty = parse_penalty_kind(sc.penalty);
  opts.nystrom_landmarks = sc.nystrom;
  opts.pie.epsilon = sc.pie_epsilon;
  opts.pie.max_iter = sc.pie_max_iter;
  opts.max_sweeps = sc.max_sweeps;
  opts.tol = sc.tol;
  opts.seed = c.seed;

  auto p = prepare(c);
  const auto train = restrict_all(p.distances, p.dataset.train_ids);
  const auto labels = p.dataset.label_indices(p.dataset.train_ids);
  const auto result = pie_ss(train, labels, static_cast<int>(p.dataset.num_classes()), opts);

  std::string text = "feature_id,name,alpha\n";
  for (std::size_t j = 0; j < result.alpha.size(); ++j)
    text += std::to_string(j) + "," + csv::quote(p.dataset.descriptors[j].name) + "," + csv::format_double(result.alpha[j]) + "\n";
  const fs::path out(sc.out);
  write_text(out / "alpha.csv", text);

  Json meta;
  meta["lambda"] = result.lambda;
  meta["beta"] = result.beta;
  meta["gamma"] = result.gamma;
  meta["penalty_kind"] = std::string(to_string(result.penalty));
  meta["sweeps_used"] = result.sweeps_used;
  meta["final_objective"] = result.final_objective;
  meta["converged"] = result.converged;
  meta["selected_ids"] = result.selected;
  meta["nystrom_landmarks"] = result.nystrom_landmarks;
  write_text(out / "alpha.json", meta.dump(2) + "\n");

  if (!sc.dump_redundancy.empty()) write_matrix_csv(result.penalty_matrix.values, sc.dump_redundancy);

  Json config = common_json(c);
  config["knn"] = sc.knn;
  config["lambda"] = sc.lambda ? Json(*sc.lambda) : Json(nullptr);
  config["target_size"] = sc.target_size ? Json(*sc.target_size) : Json(nullptr);
  config["beta"] = sc.beta;
  config["penalty"] = sc.penalty;
  config["nystrom"] = sc.nystrom ? Json(*sc.nystrom) : Json(nullptr);
  config["pie_epsilon"] = sc.pie_epsilon ? Json(*sc.pie_epsilon) : Json(nullptr);
  config["pie_max_iter"] = sc.pie_max_iter;
  config["max_sweeps"] = sc.max_sweeps;
  config["tol"] = sc.tol;
  config["dump_redundancy"] = sc.dump_redundancy.empty() ? Json(nullptr) : Json(sc.dump_redundancy);
  config["out"] = sc.out;
  write_run_json(out, "select", config);

  std::cout << "selected " << result.selected.size() << " of " << result.alpha.size() << " features:";
  for (auto j : result.selected) std::cout << ' ' << p.dataset.descriptors[j].name;
  std::cout << '\n';
  return 0;
}

struct EvalConfig {
  std::string subset;
  std::optional<std::size_t> top;
  bool weighted = false;
  std::string aggregate = "distances";
  std::size_t knn = 10;
  std::string out = "results.json";
};

struct Subset {
  std::vector<std::size_t> ids;
  std::vector<double> weights; // alpha per id when read from alpha.csv
};

Subset read_subset(const EvalConfig& ec, const Dataset& d) {
  const std::size_t m = d.num_features();
  Subset s;
  if (ec.subset.empty()) {
    if (ec.weighted) throw ParameterError("eval: --weighted needs --subset alpha.csv");
    for (std::size_t j = 0; j < m; ++j) s.ids.push_back(j);
    if (ec.top) s.ids.resize(std::min(*ec.top, m));
    return s;
  }
  const auto table = csv::read(ec.subset);
  const bool is_alpha = table.header == std::vector<std::string>{"feature_id", "name", "alpha"};
  const bool is_scores = table.header == std::vector<std::string>{"feature_id", "name", "score", "rank"};
  if (!is_alpha && !is_scores) throw InputError(ec.subset + ": expected an alpha.csv or scores.csv header");
  if (table.rows.size() != m)
    throw InputError(ec.subset + ": has " + std::to_string(table.rows.size()) + " rows, dataset has " + std::to_string(m) + " features");
  std::vector<double> value(m, 0.0);
  std::vector<bool> seen(m, false);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = ec.subset + ":" + std::to_string(table.line_numbers[r]);
    std::size_t id = 0;
    if (!csv::parse_size(row[0], id) || id >= m) throw InputError(where + ": bad feature_id '" + row[0] + "'");
    if (seen[id]) throw InputError(where + ": duplicate feature_id");
    seen[id] = true;
    if (row[1] != d.descriptors[id].name)
      throw InputError(where + ": feature " + std::to_string(id) + " is '" + d.descriptors[id].name + "' in the dataset, not '" + row[1] + "'");
    if (!csv::parse_double(row[2], value[id])) throw InputError(where + ": unparsable value '" + row[2] + "'");
  }
  if (is_scores) {
    if (ec.weighted) throw ParameterError("eval: --weighted needs alpha.csv, not scores.csv");
    if (!ec.top) throw ParameterError("eval: scores.csv needs --top K");
    s.ids = order_by_score(value);
    s.ids.resize(std::min(*ec.top, m));
    std::sort(s.ids.begin(), s.ids.end());
    return s;
  }
  std::vector<std::size_t> positive = support(value);
  if (ec.top && *ec.top < positive.size()) {
    std::vector<double> sel_alpha;
    for (auto j : positive) sel_alpha.push_back(value[j]);
    auto order = order_by_score(sel_alpha);
    order.resize(*ec.top);
    std::vector<std::size_t> kept;
    for (auto o : order) kept.push_back(positive[o]);
    std::sort(kept.begin(), kept.end());
    positive = std::move(kept);
  }
  s.ids = positive;
  for (auto j : s.ids) s.weights.push_back(value[j]);
  return s;
}

int cmd_eval(const CommonConfig& c, const EvalConfig& ec) {
  if (ec.aggregate != "distances" && ec.aggregate != "graphs")
    throw ParameterError("eval: --aggregate must be 'distances' or 'graphs'");
  auto p = prepare(c);
  const auto subset = read_subset(ec, p.dataset);
  if (subset.ids.empty()) throw InputError("eval: empty selection");

  std::optional<std::span<const double>> weights;
  if (ec.weighted) weights = std::span<const double>(subset.weights);

  AggregatedDistance agg;
  if (ec.aggregate == "distances") {
    std::vector<DistanceMatrix> chosen;
    for (auto j : subset.ids) chosen.push_back(p.distances[j]);
    agg = aggregate(chosen, weights);
  } else {
    const std::size_t k = effective_knn(ec.knn, p.dataset.num_segments());
    std::vector<SimilarityGraph> graphs;
    for (auto j : subset.ids) graphs.push_back(symmetrize(knn_graph(p.distances[j].values, k)));
    agg = aggregate_graph_complements(graphs, weights);
  }

  // Test labels are read only here, for scoring.
  std::vector<int> train_labels(p.dataset.num_segments(), -1);
  for (auto id : p.dataset.train_ids) train_labels[id] = p.dataset.label_index(id);
  const auto predicted = nn1_classify(agg.values, p.dataset.train_ids, p.dataset.test_ids, train_labels);
  const auto truth = p.dataset.label_indices(p.dataset.test_ids);
  const double acc = accuracy(predicted, truth);

  Json results;
  results["accuracy"] = acc;
  results["n_selected"] = subset.ids.size();
  results["selected_ids"] = subset.ids;
  results["weighted"] = ec.weighted;
  const fs::path out(ec.out);
  write_text(out, results.dump(2) + "\n");

  Json config = common_json(c);
  config["subset"] = ec.subset.empty() ? Json(nullptr) : Json(ec.subset);
  config["top"] = ec.top ? Json(*ec.top) : Json(nullptr);
  config["weighted"] = ec.weighted;
  config["aggregate"] = ec.aggregate;
  config["knn"] = ec.knn;
  config["out"] = ec.out;
  write_run_json(out.has_parent_path() ? out.parent_path() : fs::path("."), "eval", config);

  std::cout << "accuracy " << csv::format_double(acc) << " with " << subset.ids.size() << " features\n";
  return 0;
}

struct SynthConfig {
  SyntheticOptions options;
  std::string out;
};

int cmd_gen(SynthConfig sc) {
  const auto d = gen_synthetic(sc.options);
  write_dataset(d, sc.out);
  Json config;
  config["n"] = sc.options.segments;
  config["classes"] = sc.options.classes;
  config["informative"] = sc.options.informative;
  config["noise"] = sc.options.noise;
  config["duplicate"] = sc.options.duplicates;
  config["min_length"] = sc.options.min_length;
  config["max_length"] = sc.options.max_length;
  config["level_spacing"] = sc.options.level_spacing;
  config["seed"] = sc.options.seed;
  config["out"] = sc.out;
  write_run_json(sc.out, "gen-synthetic", config);
  std::cout << "wrote " << d.num_segments() << " segments, " << d.num_features() << " features to " << sc.out << '\n';
  return 0;
}

} // namespace

int run(int argc, char** argv) {
  CLI::App app{"Sensor ranking and subset selection for labeled multivariate time series"};
  app.require_subcommand(1);

  CommonConfig common;
  RankConfig rank_cfg;
  SelectConfig select_cfg;
  EvalConfig eval_cfg;
  SynthConfig synth_cfg;

  auto* rank = app.add_subcommand("rank", "Score every sensor by NMI of its graph embedding with the labels");
  add_common(rank, common);
  rank->add_option("--knn", rank_cfg.knn, "Neighbors per vertex in the similarity graphs");
  rank->add_option("--pie-epsilon", rank_cfg.pie_epsilon, "Power iteration stopping threshold (default 1e-6/n)");
  rank->add_option("--pie-max-iter", rank_cfg.pie_max_iter, "Power iteration cap");
  rank->add_option("--out", rank_cfg.out, "Output directory");

  auto* sel = app.add_subcommand("select", "Sparse redundancy-penalized sensor subset selection");
  add_common(sel, common);
  sel->add_option("--knn", select_cfg.knn, "Neighbors per vertex in the similarity graphs");
  auto* lambda_opt = sel->add_option("--lambda", select_cfg.lambda, "l1 penalty weight");
  auto* target_opt = sel->add_option("--target-size", select_cfg.target_size, "Bisect lambda for this many selected sensors");
  lambda_opt->excludes(target_opt);
  sel->add_option("--beta", select_cfg.beta, "Redundancy penalty weight");
  sel->add_option("--penalty", select_cfg.penalty, "Redundancy penalty: mi or cmi")->check(CLI::IsMember({"mi", "cmi"}));
  sel->add_option("--nystrom", select_cfg.nystrom, "Nystrom landmark count (0 disables; default auto when m > 512)");
  sel->add_option("--pie-epsilon", select_cfg.pie_epsilon, "Power iteration stopping threshold (default 1e-6/n)");
  sel->add_option("--pie-max-iter", select_cfg.pie_max_iter, "Power iteration cap");
  sel->add_option("--max-sweeps", select_cfg.max_sweeps, "Coordinate descent sweep cap");
  sel->add_option("--tol", select_cfg.tol, "Coordinate descent tolerance");
  sel->add_option("--dump-redundancy", select_cfg.dump_redundancy, "Write the shifted penalty matrix to this CSV");
  sel->add_option("--out", select_cfg.out, "Output directory");

  auto* ev = app.add_subcommand("eval", "1-NN accuracy of a sensor subset on the test segments");
  add_common(ev, common);
  ev->add_option("--subset", eval_cfg.subset, "alpha.csv or scores.csv (default: all sensors)");
  ev->add_option("--top", eval_cfg.top, "Keep the K best sensors of the subset file");
  ev->add_flag("--weighted", eval_cfg.weighted, "Weight each sensor's distances by its alpha");
  ev->add_option("--aggregate", eval_cfg.aggregate, "Aggregate 'distances' (default) or 'graphs' (1 - W)");
  ev->add_option("--knn", eval_cfg.knn, "Neighbors per vertex for --aggregate graphs");
  ev->add_option("--out", eval_cfg.out, "Results JSON path");

  auto* gen = app.add_subcommand("gen-synthetic", "Write a planted synthetic dataset");
  gen->add_option("--n", synth_cfg.options.segments, "Number of segments");
  gen->add_option("--classes", synth_cfg.options.classes, "Number of classes");
  gen->add_option("--informative", synth_cfg.options.informative, "Informative sensors");
  gen->add_option("--noise", synth_cfg.options.noise, "Pure-noise sensors");
  gen->add_option("--duplicate", synth_cfg.options.duplicates, "Append an exact copy of this sensor id (repeatable)");
  gen->add_option("--min-length", synth_cfg.options.min_length, "Shortest series");
  gen->add_option("--max-length", synth_cfg.options.max_length, "Longest series");
  gen->add_option("--level-spacing", synth_cfg.options.level_spacing, "Class level gap in noise standard deviations");
  gen->add_option("--seed", synth_cfg.options.seed, "Generator seed");
  gen->add_option("--out", synth_cfg.out, "Output dataset directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (rank->parsed()) return cmd_rank(common, rank_cfg);
    if (sel->parsed()) return cmd_select(common, select_cfg);
    if (ev->parsed()) return cmd_eval(common, eval_cfg);
    if (gen->parsed()) return cmd_gen(synth_cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> copy = args;
  std::vector<char*> argv;
  for (auto& a : copy) argv.push_back(a.data());
  argv.push_back(nullptr);
  return run(static_cast<int>(copy.size()), argv.data());
}

} // namespace mtssel::cli
