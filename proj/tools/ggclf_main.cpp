// ggclf: Gabriel-graph classification toolkit.
// Exit codes: 0 success, 2 usage error, 1 data or model error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ggclf/ggclf.hpp"

namespace {

using ggclf::Error;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

void write_json(const std::string& path, const ggclf::Json& j) {
  write_text(path, j.dump(2) + "\n");
}

struct DataArgs {
  std::string path;
  std::string label = "label";
  std::string positive;
  std::string delimiter = ",";
  std::string header = "auto";
};

void add_data_options(CLI::App* cmd, DataArgs& a, bool positive_required = true) {
  cmd->add_option("--data", a.path, "dataset file (delimited text)")->required();
  cmd->add_option("--label", a.label, "label column, header name or 0-based index")
      ->capture_default_str();
  auto* pos = cmd->add_option("--positive", a.positive, "label value mapped to the positive class");
  if (positive_required) pos->required();
  cmd->add_option("--delimiter", a.delimiter, "field delimiter")->capture_default_str();
  cmd->add_option("--header", a.header, "header row present: auto, yes, no")
      ->check(CLI::IsMember({"auto", "yes", "no"}))
      ->capture_default_str();
}

ggclf::CsvFormat csv_format(const DataArgs& a) {
  if (a.delimiter.size() != 1) throw Error("delimiter must be a single character");
  ggclf::CsvFormat fmt;
  fmt.delimiter = a.delimiter[0];
  fmt.header = a.header == "yes"  ? ggclf::CsvFormat::Header::Yes
               : a.header == "no" ? ggclf::CsvFormat::Header::No
                                  : ggclf::CsvFormat::Header::Auto;
  return fmt;
}

ggclf::Dataset load_data(const DataArgs& a) {
  return ggclf::load_csv(a.path, a.label, a.positive, csv_format(a));
}

// ---- graph ----------------------------------------------------------------

struct GraphArgs {
  DataArgs data;
  bool normalize = false;
  std::string edges_out;
  std::string adjacency_out;
};

void run_graph(const GraphArgs& a) {
  ggclf::Dataset ds = load_data(a.data);
  if (a.normalize) ds = ggclf::normalize_zscore(ds).first;
  const auto g = ggclf::build_gabriel(ds.points());

  std::ostringstream text;
  text << "# schema: ggclf/edges/v1\n";
  text << "# n: " << g.n << "\n";
  for (const auto& [i, j] : g.edges) text << i << '\t' << j << '\n';
  write_text(a.edges_out, text.str());

  if (!a.adjacency_out.empty()) {
    ggclf::Json j;
    j["schema"] = "ggclf/graph/v1";
    j["n"] = g.n;
    j["edge_count"] = g.edges.size();
    ggclf::Json edges = ggclf::Json::array();
    for (const auto& [p, q] : g.edges) edges.push_back(ggclf::Json::array({p, q}));
    j["edges"] = std::move(edges);
    j["neighbors"] = g.neighbors;
    j["dataset_hash"] = ggclf::dataset_hash(ds);
    write_json(a.adjacency_out, j);
  }
}

// ---- quality ---------------------------------------------------------------

struct QualityArgs {
  DataArgs data;
  bool normalize = true;
  std::vector<double> h{1.0, 1.0};
  std::string rule = "flexible";
  std::string out;
};

void run_quality(const QualityArgs& a) {
  ggclf::Dataset ds = load_data(a.data);
  if (a.normalize) ds = ggclf::normalize_zscore(ds).first;
  const auto g = ggclf::build_gabriel(ds.points());
  const auto q = ggclf::quality_index(g, ds.labels);
  const auto theta = ggclf::class_thresholds(q, ds.labels);
  const std::pair<double, double> h{a.h[0], a.h[1]};
  const auto mask = a.rule == "fixed"
                        ? ggclf::removal_mask(q, ds.labels, theta, {1.0, 1.0})
                        : ggclf::removal_mask(q, ds.labels, theta, h);

  std::ostringstream text;
  text << "# schema: ggclf/quality/v1\n";
  text << "# theta_pos: " << num(theta.first) << "\n";
  text << "# theta_neg: " << num(theta.second) << "\n";
  text << "# h_pos: " << num(a.rule == "fixed" ? 1.0 : h.first) << "\n";
  text << "# h_neg: " << num(a.rule == "fixed" ? 1.0 : h.second) << "\n";
  text << "index\tlabel\tq\ttheta\tremoved\n";
  for (std::size_t i = 0; i < ds.rows; ++i) {
    const bool pos = ds.labels[i] == ggclf::kPositive;
    text << i << '\t' << (pos ? ds.positive_name : ds.negative_name) << '\t' << num(q[i]) << '\t'
         << num(pos ? theta.first : theta.second) << '\t' << (mask[i] ? 1 : 0) << '\n';
  }
  write_text(a.out, text.str());
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
  DataArgs data;
  std::vector<double> h{1.0, 1.0};
  std::string rule = "flexible";
  bool filter = true;
  bool normalize = true;
  bool drop_duplicates = false;
  std::uint64_t seed = 0;
  std::string out;
};

ggclf::TrainConfig train_config(const TrainArgs& a) {
  ggclf::TrainConfig cfg;
  cfg.h_pos = a.h[0];
  cfg.h_neg = a.h[1];
  cfg.enable_filter = a.filter;
  cfg.normalize = a.normalize;
  cfg.rule = a.rule == "fixed" ? ggclf::TrainConfig::Rule::Fixed : ggclf::TrainConfig::Rule::Flexible;
  cfg.drop_duplicates = a.drop_duplicates;
  cfg.seed = a.seed;
  return cfg;
}

void run_train(const TrainArgs& a) {
  const ggclf::Dataset ds = load_data(a.data);
  const auto model = ggclf::train(ds, train_config(a));
  ggclf::save_model(model, a.out);
  std::cerr << "model: " << model.edges.size() << " support edges, dimension " << model.dimension
            << ", written to " << a.out << "\n";
}

// ---- predict ---------------------------------------------------------------

struct PredictArgs {
  std::string model_path;
  DataArgs data;
  std::string out;
};

void run_predict(const PredictArgs& a) {
  const auto model = ggclf::load_model(a.model_path);
  std::ostringstream text;
  text << "# schema: ggclf/predictions/v1\n";

  if (!a.data.positive.empty()) {
    const ggclf::Dataset ds = load_data(a.data);
    if (ds.cols != model.dimension)
      throw Error("dimension mismatch: model expects " + std::to_string(model.dimension) +
                  " features, data has " + std::to_string(ds.cols));
    const auto probs = ggclf::predict_proba_batch(ds, model);
    text << "# auc: " << num(ggclf::auc(probs, ds.labels)) << "\n";
    text << "index\tp_positive\tprediction\tlabel\n";
    for (std::size_t i = 0; i < ds.rows; ++i) {
      const int pred = probs[i] >= 0.5 ? ggclf::kPositive : ggclf::kNegative;
      text << i << '\t' << num(probs[i]) << '\t'
           << (pred == ggclf::kPositive ? ds.positive_name : ds.negative_name) << '\t'
           << (ds.labels[i] == ggclf::kPositive ? ds.positive_name : ds.negative_name) << '\n';
    }
  } else {
    const auto ft = ggclf::load_csv_features(a.data.path, csv_format(a.data),
                                             a.data.label == "label" ? "" : a.data.label);
    if (ft.cols != model.dimension)
      throw Error("dimension mismatch: model expects " + std::to_string(model.dimension) +
                  " features, data has " + std::to_string(ft.cols));
    text << "index\tp_positive\tprediction\n";
    for (std::size_t i = 0; i < ft.rows; ++i) {
      const double p = ggclf::predict_proba(ft.row(i), model);
      text << i << '\t' << num(p) << '\t' << (p >= 0.5 ? "+1" : "-1") << '\n';
    }
  }
  write_text(a.out, text.str());
}

// ---- tune ------------------------------------------------------------------

struct TuneArgs {
  DataArgs data;
  std::size_t budget = 50;
  int inner_k = 5;
  std::uint64_t seed = 0;
  double h_lo = 0.1;
  double h_hi = 10.0;
  bool normalize = true;
  bool drop_duplicates = false;
  std::string history_out;
  std::string out;
};

void run_tune(const TuneArgs& a) {
  const ggclf::Dataset ds = load_data(a.data);
  ggclf::TrainConfig base;
  base.normalize = a.normalize;
  base.drop_duplicates = a.drop_duplicates;

  const auto objective = ggclf::cv_objective(ds, a.inner_k, ggclf::mix_seed(a.seed, 10), base);
  ggclf::SearchSpace space;
  space.params = {{"h_pos", a.h_lo, a.h_hi, true}, {"h_neg", a.h_lo, a.h_hi, true}};
  space.budget = a.budget;
  space.seed = ggclf::mix_seed(a.seed, 20);
  space.anchor = {1.0, 1.0};
  const auto result = ggclf::tune(objective, space);

  if (!a.history_out.empty()) {
    std::ostringstream lines;
    for (const auto& rec : result.history)
      lines << ggclf::trial_to_json(rec, space.params).dump() << '\n';
    write_text(a.history_out, lines.str());
  }
  if (!a.out.empty()) {
    ggclf::TrainConfig cfg = base;
    cfg.h_pos = result.best.params[0];
    cfg.h_neg = result.best.params[1];
    cfg.seed = a.seed;
    ggclf::save_model(ggclf::train(ds, cfg), a.out);
  }
  std::ostringstream summary;
  summary << "best\ttrial=" << result.best.trial_index << "\th_pos=" << num(result.best.params[0])
          << "\th_neg=" << num(result.best.params[1]) << "\tinner_auc=" << num(result.best.score)
          << "\n";
  std::fputs(summary.str().c_str(), stdout);
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  DataArgs data;
  ggclf::BenchmarkConfig cfg;
  std::string out;
};

void run_bench(const BenchArgs& a) {
  const ggclf::Dataset ds = load_data(a.data);
  const auto report = ggclf::run_benchmark(ds, a.cfg);
  write_json(a.out, ggclf::to_json(report));
  std::printf("mean_auc\ttuned=%s\tfixed=%s\n", num(report.mean_tuned_auc).c_str(),
              num(report.mean_fixed_auc).c_str());
}

// ---- margin-curve ----------------------------------------------------------

struct CurveArgs {
  std::string var_range = "0:1:0.1";
  std::size_t n_per_class = 200;
  std::uint64_t seed = 7;
  std::vector<double> mu0{3.0, 3.0};
  std::vector<double> mu1{5.0, 5.0};
  std::string out;
};

std::vector<double> parse_range(const std::string& spec) {
  // "lo:hi:step", endpoints inclusive
  double lo = 0, hi = 0, step = 0;
  char extra;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &extra) != 3 || step <= 0 ||
      hi < lo)
    throw Error("bad range '" + spec + "', expected lo:hi:step with step > 0");
  std::vector<double> vals;
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) vals.push_back(lo + i * step);
  return vals;
}

void run_curve(const CurveArgs& a) {
  const auto variances = parse_range(a.var_range);
  const std::span<const double, 2> mu0(a.mu0.data(), 2), mu1(a.mu1.data(), 2);
  const auto rows = ggclf::margin_curve(variances, a.n_per_class, a.seed, mu0, mu1);
  std::ostringstream text;
  text << "# schema: ggclf/margin-curve/v1\n";
  text << "# n_per_class: " << a.n_per_class << "\n";
  text << "# seed: " << a.seed << "\n";
  text << "variance\tmean_margin\tmean_margin_filtered\tmean_quality\n";
  for (const auto& r : rows)
    text << num(r.variance) << '\t' << num(r.mean_unfiltered) << '\t' << num(r.mean_filtered)
         << '\t' << num(r.mean_quality) << '\n';
  write_text(a.out, text.str());
}

// ---- margin-surface --------------------------------------------------------

struct SurfaceArgs {
  DataArgs data;
  bool have_data = false;
  double gauss_var = 0.3;
  std::size_t n_per_class = 500;
  std::uint64_t seed = 11;
  std::vector<double> mu0{3.0, 3.0};
  std::vector<double> mu1{5.0, 5.0};
  double h_lo = 0.25;
  double h_hi = 4.0;
  std::size_t steps = 17;
  std::string out;
};

void run_surface(const SurfaceArgs& a) {
  ggclf::Dataset ds;
  if (a.have_data) {
    ds = load_data(a.data);
  } else {
    const std::span<const double, 2> mu0(a.mu0.data(), 2), mu1(a.mu1.data(), 2);
    ds = ggclf::gen_gaussian_pair(mu0, mu1, a.gauss_var, a.n_per_class, a.seed);
  }
  const auto grid = ggclf::log_grid(a.h_lo, a.h_hi, a.steps);
  const auto surf = ggclf::margin_surface(ds, grid, grid);
  std::ostringstream text;
  text << "# schema: ggclf/margin-surface/v1\n";
  text << "h_pos\th_neg\tmean_margin\tkept_count\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j)
      text << num(surf.h_pos_grid[i]) << '\t' << num(surf.h_neg_grid[j]) << '\t'
           << num(surf.cell(i, j)) << '\t' << surf.kept_count[i * grid.size() + j] << '\n';
  write_text(a.out, text.str());
}

// ---- stats -----------------------------------------------------------------

struct StatsArgs {
  std::string table_path;
  double alpha = 0.05;
  double q_override = -1.0;  // negative means "use the embedded table"
  double f_critical = -1.0;  // negative means "no decision line"
  std::string delimiter = ",";
  std::string json_out;
};

void run_stats(const StatsArgs& a) {
  if (a.delimiter.size() != 1) throw Error("delimiter must be a single character");
  const auto table = ggclf::load_score_table(a.table_path, a.delimiter[0]);
  const double q = a.q_override >= 0.0 ? a.q_override
                                       : ggclf::bonferroni_dunn_q(table.k(), a.alpha);
  const auto summary = ggclf::rank_analysis(table, q);

  std::size_t width = 10;
  for (const auto& name : table.classifiers) width = std::max(width, name.size());

  std::ostringstream text;
  char line[160];
  std::snprintf(line, sizeof(line), "%-*s  %10s  %s\n", static_cast<int>(width), "classifier",
                "avg rank", "within CD of best");
  text << line;
  for (std::size_t c = 0; c < table.k(); ++c) {
    std::snprintf(line, sizeof(line), "%-*s  %10.4f  %s%s\n", static_cast<int>(width),
                  table.classifiers[c].c_str(), summary.average_ranks[c],
                  summary.within_cd_of_best[c] ? "yes" : "no", c == summary.best ? " (best)" : "");
    text << line;
  }
  std::snprintf(line, sizeof(line),
                "datasets: %zu  classifiers: %zu\nfriedman chi2 = %.4f\nfriedman F = %.4f\n"
                "q_alpha = %.4f\nCD = %.4f\n",
                summary.n_datasets, summary.n_classifiers, summary.friedman_chi2,
                summary.friedman_F, q, summary.cd);
  text << line;
  if (a.f_critical >= 0.0) {
    std::snprintf(line, sizeof(line), "null hypothesis (equal ranks): %s at F critical %.4f\n",
                  summary.friedman_F > a.f_critical ? "rejected" : "not rejected", a.f_critical);
    text << line;
  }
  std::fputs(text.str().c_str(), stdout);

  if (!a.json_out.empty()) {
    ggclf::Json j;
    j["schema"] = "ggclf/stats/v1";
    j["classifiers"] = table.classifiers;
    j["average_ranks"] = summary.average_ranks;
    j["n_datasets"] = summary.n_datasets;
    j["k"] = summary.n_classifiers;
    j["friedman_chi2"] = summary.friedman_chi2;
    j["friedman_F"] = summary.friedman_F;
    j["q_alpha"] = q;
    j["cd"] = summary.cd;
    j["best"] = table.classifiers[summary.best];
    j["within_cd_of_best"] = summary.within_cd_of_best;
    if (a.f_critical >= 0.0) {
      j["f_critical"] = a.f_critical;
      j["reject_null"] = summary.friedman_F > a.f_critical;
    }
    write_json(a.json_out, j);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gabriel-graph large-margin classification toolkit"};
  app.require_subcommand(1);
  // "--h" is a real option below, so help is long-form only
  app.set_help_flag("--help", "print help and exit");

  GraphArgs graph_args;
  auto* graph_cmd = app.add_subcommand("graph", "Gabriel graph edges and adjacency of a dataset");
  graph_cmd->set_help_flag("--help", "print help and exit");
  add_data_options(graph_cmd, graph_args.data);
  graph_cmd->add_flag("--normalize", graph_args.normalize, "z-score features first");
  graph_cmd->add_option("--edges", graph_args.edges_out, "edge list output (default stdout)");
  graph_cmd->add_option("--adjacency", graph_args.adjacency_out, "adjacency JSON output");

  QualityArgs quality_args;
  auto* quality_cmd =
      app.add_subcommand("quality", "per-sample quality index, thresholds, removal decisions");
  quality_cmd->set_help_flag("--help", "print help and exit");
  add_data_options(quality_cmd, quality_args.data);
  quality_cmd->add_flag("--normalize,!--no-normalize", quality_args.normalize,
                        "z-score features first (default on, as in training)");
  quality_cmd->add_option("--h", quality_args.h, "per-class multipliers h_pos h_neg")
      ->expected(2)
      ->capture_default_str();
  quality_cmd->add_option("--rule", quality_args.rule, "removal rule: flexible or fixed")
      ->check(CLI::IsMember({"flexible", "fixed"}))
      ->capture_default_str();
  quality_cmd->add_option("--out", quality_args.out, "output path (default stdout)");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train a classifier and write the model file");
  train_cmd->set_help_flag("--help", "print help and exit");
  add_data_options(train_cmd, train_args.data);
  train_cmd->add_option("--h", train_args.h, "per-class multipliers h_pos h_neg")
      ->expected(2)
      ->capture_default_str();
  train_cmd->add_option("--rule", train_args.rule, "removal rule: flexible or fixed")
      ->check(CLI::IsMember({"flexible", "fixed"}))
      ->capture_default_str();
  train_cmd->add_flag("--filter,!--no-filter", train_args.filter,
                      "filter low-quality samples before extracting support edges");
  train_cmd->add_flag("--normalize,!--no-normalize", train_args.normalize, "z-score features");
  train_cmd->add_flag("--drop-duplicates", train_args.drop_duplicates,
                      "collapse exact repeat rows before training");
  train_cmd->add_option("--seed", train_args.seed, "seed recorded in model metadata")
      ->capture_default_str();
  train_cmd->add_option("--out", train_args.out, "model file to write")->required();

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "score samples with a trained model");
  predict_cmd->set_help_flag("--help", "print help and exit");
  predict_cmd->add_option("--model", predict_args.model_path, "model file")->required();
  add_data_options(predict_cmd, predict_args.data, false);
  predict_cmd->add_option("--out", predict_args.out, "output path (default stdout)");

  TuneArgs tune_args;
  auto* tune_cmd = app.add_subcommand("tune", "search (h_pos, h_neg) by inner cross-validation");
  tune_cmd->set_help_flag("--help", "print help and exit");
  add_data_options(tune_cmd, tune_args.data);
  tune_cmd->add_option("--budget", tune_args.budget, "trial budget")->capture_default_str();
  tune_cmd->add_option("--inner-k", tune_args.inner_k, "inner validation folds")
      ->capture_default_str();
  tune_cmd->add_option("--seed", tune_args.seed, "search seed")->capture_default_str();
  tune_cmd->add_option("--h-lo", tune_args.h_lo, "lower bound for h")->capture_default_str();
  tune_cmd->add_option("--h-hi", tune_args.h_hi, "upper bound for h")->capture_default_str();
  tune_cmd->add_flag("--normalize,!--no-normalize", tune_args.normalize, "z-score features");
  tune_cmd->add_flag("--drop-duplicates", tune_args.drop_duplicates,
                     "collapse exact repeat rows in training portions");
  tune_cmd->add_option("--history", tune_args.history_out, "trial history JSONL output");
  tune_cmd->add_option("--out", tune_args.out, "model trained on all data with the best h");

  BenchArgs bench_args;
  auto* bench_cmd =
      app.add_subcommand("bench", "nested cross-validation benchmark with threshold tuning");
  bench_cmd->set_help_flag("--help", "print help and exit");
  add_data_options(bench_cmd, bench_args.data);
  bench_cmd->add_option("--outer-k", bench_args.cfg.outer_k, "outer test folds")
      ->capture_default_str();
  bench_cmd->add_option("--inner-k", bench_args.cfg.inner_k, "inner validation folds")
      ->capture_default_str();
  bench_cmd->add_option("--budget", bench_args.cfg.budget, "tuner trials per outer fold")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_args.cfg.seed, "benchmark seed")->capture_default_str();
  bench_cmd->add_option("--h-lo", bench_args.cfg.h_lo, "lower bound for h")->capture_default_str();
  bench_cmd->add_option("--h-hi", bench_args.cfg.h_hi, "upper bound for h")->capture_default_str();
  bench_cmd->add_flag("--normalize,!--no-normalize", bench_args.cfg.normalize, "z-score features");
  bench_cmd->add_flag("!--keep-duplicates", bench_args.cfg.drop_duplicates,
                      "keep exact repeat rows instead of collapsing them");
  bench_cmd->add_option("--out", bench_args.out, "JSON report path")->required();

  CurveArgs curve_args;
  auto* curve_cmd =
      app.add_subcommand("margin-curve", "mean margin and quality index vs class overlap");
  curve_cmd->set_help_flag("--help", "print help and exit");
  curve_cmd->add_option("--var", curve_args.var_range, "variance range lo:hi:step")
      ->capture_default_str();
  curve_cmd->add_option("--n", curve_args.n_per_class, "samples per class")->capture_default_str();
  curve_cmd->add_option("--seed", curve_args.seed, "generator seed")->capture_default_str();
  curve_cmd->add_option("--mu0", curve_args.mu0, "negative-class mean")
      ->expected(2)
      ->capture_default_str();
  curve_cmd->add_option("--mu1", curve_args.mu1, "positive-class mean")
      ->expected(2)
      ->capture_default_str();
  curve_cmd->add_option("--out", curve_args.out, "TSV output path (default stdout)");

  SurfaceArgs surface_args;
  auto* surface_cmd =
      app.add_subcommand("margin-surface", "kept-sample mean margin over the (h_pos, h_neg) grid");
  surface_cmd->set_help_flag("--help", "print help and exit");
  auto* sdata = surface_cmd->add_option("--data", surface_args.data.path, "dataset file");
  surface_cmd->add_option("--label", surface_args.data.label, "label column")
      ->capture_default_str();
  surface_cmd->add_option("--positive", surface_args.data.positive, "positive label value");
  surface_cmd->add_option("--delimiter", surface_args.data.delimiter, "field delimiter")
      ->capture_default_str();
  surface_cmd->add_option("--gauss-var", surface_args.gauss_var, "synthetic data variance")
      ->capture_default_str();
  surface_cmd->add_option("--n", surface_args.n_per_class, "synthetic samples per class")
      ->capture_default_str();
  surface_cmd->add_option("--seed", surface_args.seed, "generator seed")->capture_default_str();
  surface_cmd->add_option("--mu0", surface_args.mu0, "negative-class mean")
      ->expected(2)
      ->capture_default_str();
  surface_cmd->add_option("--mu1", surface_args.mu1, "positive-class mean")
      ->expected(2)
      ->capture_default_str();
  surface_cmd->add_option("--h-lo", surface_args.h_lo, "grid lower bound")->capture_default_str();
  surface_cmd->add_option("--h-hi", surface_args.h_hi, "grid upper bound")->capture_default_str();
  surface_cmd->add_option("--steps", surface_args.steps, "grid points per axis")
      ->capture_default_str();
  surface_cmd->add_option("--out", surface_args.out, "TSV output path (default stdout)");

  StatsArgs stats_args;
  auto* stats_cmd =
      app.add_subcommand("stats", "rank analysis of a score table: Friedman and critical difference");
  stats_cmd->set_help_flag("--help", "print help and exit");
  stats_cmd->add_option("--table", stats_args.table_path, "score table CSV")->required();
  stats_cmd->add_option("--alpha", stats_args.alpha, "significance level: 0.05 or 0.10")
      ->capture_default_str();
  stats_cmd->add_option("--q", stats_args.q_override, "override the critical value q_alpha");
  stats_cmd->add_option("--f-critical", stats_args.f_critical,
                        "F critical value for the rejection decision line");
  stats_cmd->add_option("--delimiter", stats_args.delimiter, "field delimiter")
      ->capture_default_str();
  stats_cmd->add_option("--json", stats_args.json_out, "JSON report path");

  graph_cmd->callback([&] { run_graph(graph_args); });
  quality_cmd->callback([&] { run_quality(quality_args); });
  train_cmd->callback([&] { run_train(train_args); });
  predict_cmd->callback([&] { run_predict(predict_args); });
  tune_cmd->callback([&] { run_tune(tune_args); });
  bench_cmd->callback([&] { run_bench(bench_args); });
  curve_cmd->callback([&] { run_curve(curve_args); });
  surface_cmd->callback([&] {
    surface_args.have_data = sdata->count() > 0;
    if (surface_args.have_data && surface_args.data.positive.empty())
      throw CLI::RequiredError("--positive (required with --data)");
    run_surface(surface_args);
  });
  stats_cmd->callback([&] { run_stats(stats_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // help or version request
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
