#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ggclf/chipclass.hpp"
#include "ggclf/common.hpp"
#include "ggclf/dataset.hpp"
#include "ggclf/evaluation.hpp"
#include "ggclf/tuner.hpp"

namespace ggclf {

/// Nested cross-validation protocol: outer_k test folds; on each outer-train
/// portion the thresholds (h_pos, h_neg) are tuned by inner_k-fold validation
/// AUC under the trial budget. budget = 1 evaluates only the anchor (1, 1),
/// which is the fixed-threshold classifier.
struct BenchmarkConfig {
  int outer_k = 10;
  int inner_k = 5;
  std::size_t budget = 50;
  std::uint64_t seed = 0;
  double h_lo = 0.1;
  double h_hi = 10.0;
  bool normalize = true;
  bool drop_duplicates = true;  // collapse repeated rows in training portions
  TpeConfig tpe;
};

struct FoldOutcome {
  int fold = 0;
  double h_pos = 1.0;              // chosen by the tuner
  double h_neg = 1.0;
  double tuned_auc = 0.0;          // held-out AUC with the chosen thresholds
  double fixed_auc = 0.0;          // held-out AUC with h = (1, 1)
  double inner_best_score = 0.0;   // best inner-validation mean AUC
  double inner_anchor_score = 0.0; // anchor trial's inner-validation mean AUC, NaN if invalid
};

struct BenchmarkReport {
  BenchmarkConfig config;
  std::string data_hash;
  std::vector<FoldOutcome> folds;
  double mean_tuned_auc = 0.0;
  double mean_fixed_auc = 0.0;
};

inline BenchmarkReport run_benchmark(const Dataset& ds, const BenchmarkConfig& cfg = {}) {
  ds.validate_for_training();
  if (cfg.outer_k < 2) throw Error("run_benchmark: outer_k must be at least 2");
  if (cfg.inner_k < 2) throw Error("run_benchmark: inner_k must be at least 2");
  if (cfg.budget < 1) throw Error("run_benchmark: budget must be at least 1");
  if (!(cfg.h_lo <= 1.0 && 1.0 <= cfg.h_hi))
    throw Error("run_benchmark: h bounds must contain 1, the fixed-threshold anchor");

  const FoldPlan outer = stratified_kfold(ds, cfg.outer_k, cfg.seed);
  BenchmarkReport rep;
  rep.config = cfg;
  rep.data_hash = dataset_hash(ds);
  rep.folds.reserve(static_cast<std::size_t>(cfg.outer_k));

  TrainConfig base;
  base.normalize = cfg.normalize;
  base.drop_duplicates = cfg.drop_duplicates;

  for (int f = 0; f < cfg.outer_k; ++f) {
    const Dataset tr = ds.subset(outer.complement_indices(f));
    const Dataset te = ds.subset(outer.fold_indices(f));

    const Objective objective =
        cv_objective(tr, cfg.inner_k, mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(f)), base);
    SearchSpace space;
    space.params = {{"h_pos", cfg.h_lo, cfg.h_hi, true}, {"h_neg", cfg.h_lo, cfg.h_hi, true}};
    space.budget = cfg.budget;
    space.seed = mix_seed(cfg.seed, 2000 + static_cast<std::uint64_t>(f));
    space.anchor = {1.0, 1.0};
    space.tpe = cfg.tpe;
    const TuneResult tuned = tune(objective, space);

    FoldOutcome fo;
    fo.fold = f;
    fo.h_pos = tuned.best.params[0];
    fo.h_neg = tuned.best.params[1];
    fo.inner_best_score = tuned.best.score;
    fo.inner_anchor_score = tuned.history.front().valid
                                ? tuned.history.front().score
                                : std::numeric_limits<double>::quiet_NaN();

    TrainConfig tuned_cfg = base;
    tuned_cfg.h_pos = fo.h_pos;
    tuned_cfg.h_neg = fo.h_neg;
    fo.tuned_auc = auc(predict_proba_batch(te, train(tr, tuned_cfg)), te.labels);

    fo.fixed_auc = auc(predict_proba_batch(te, train(tr, base)), te.labels);
    rep.folds.push_back(fo);
  }

  for (const auto& fo : rep.folds) {
    rep.mean_tuned_auc += fo.tuned_auc;
    rep.mean_fixed_auc += fo.fixed_auc;
  }
  rep.mean_tuned_auc /= static_cast<double>(rep.folds.size());
  rep.mean_fixed_auc /= static_cast<double>(rep.folds.size());
  return rep;
}

}  // namespace ggclf
