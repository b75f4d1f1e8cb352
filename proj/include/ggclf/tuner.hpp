#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ggclf/chipclass.hpp"
#include "ggclf/common.hpp"
#include "ggclf/dataset.hpp"
#include "ggclf/evaluation.hpp"
#include "ggclf/random.hpp"

namespace ggclf {

struct ParamSpec {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  bool log_scale = false;
};

/// Constants of the density-ratio strategy. Defaults give the search profile
/// used throughout: 10 random draws after the anchor, top quarter of the
/// history as the good set, 24 candidates per sequential trial.
struct TpeConfig {
  std::size_t n_startup = 10;
  double gamma = 0.25;
  std::size_t n_candidates = 24;
  double prior_weight = 0.5;      // mass of the flat component anchoring each density
  double bandwidth_floor = 0.01;  // kernel width bounds in unit coordinates
  double bandwidth_max = 1.0;
};

struct SearchSpace {
  std::vector<ParamSpec> params;
  std::size_t budget = 50;
  std::uint64_t seed = 0;
  std::vector<double> anchor;  // evaluated as trial 1 when nonempty
  TpeConfig tpe;
};

struct TrialRecord {
  std::vector<double> params;
  double score = std::numeric_limits<double>::quiet_NaN();  // NaN when invalid
  bool valid = false;
  std::size_t trial_index = 0;  // 1-based evaluation order
};

struct TuneResult {
  TrialRecord best;
  std::vector<TrialRecord> history;
};

/// Deterministic given its arguments and the harness seed. Returns NaN to
/// mark an invalid point (scored as worst, never propagated as an error).
using Objective = std::function<double(std::span<const double>)>;

namespace detail {

inline double to_unit(double x, const ParamSpec& p) {
  if (p.hi == p.lo) return 0.0;
  if (p.log_scale) return (std::log(x) - std::log(p.lo)) / (std::log(p.hi) - std::log(p.lo));
  return (x - p.lo) / (p.hi - p.lo);
}

inline double from_unit(double u, const ParamSpec& p) {
  u = std::clamp(u, 0.0, 1.0);
  const double x = p.log_scale ? std::exp(std::log(p.lo) + u * (std::log(p.hi) - std::log(p.lo)))
                               : p.lo + u * (p.hi - p.lo);
  return std::clamp(x, p.lo, p.hi);
}

/// Gaussian mixture truncated to [0, 1]: one flat prior component plus one
/// kernel per observation, bandwidths taken from neighbor spacing.
struct UnitKde {
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<double> weight;  // sums to 1

  double pdf(double u) const {
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    constexpr double inv_sqrt2pi = 0.3989422804014326779;
    double total = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double z = (u - mu[i]) / sigma[i];
      const double mass = 0.5 * (std::erf((1.0 - mu[i]) / sigma[i] * inv_sqrt2) -
                                 std::erf((0.0 - mu[i]) / sigma[i] * inv_sqrt2));
      total += weight[i] * std::exp(-0.5 * z * z) * inv_sqrt2pi / (sigma[i] * mass);
    }
    return total;
  }

  double sample(Rng& rng) const {
    const double r = rng.uniform01();
    std::size_t c = mu.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      acc += weight[i];
      if (r < acc) {
        c = i;
        break;
      }
    }
    for (int attempt = 0; attempt < 100; ++attempt) {
      const double u = mu[c] + sigma[c] * rng.normal();
      if (u >= 0.0 && u <= 1.0) return u;
    }
    return std::clamp(mu[c], 0.0, 1.0);
  }
};

inline UnitKde build_kde(const std::vector<double>& centers, const TpeConfig& cfg) {
  UnitKde kde;
  const std::size_t m = centers.size();
  const double total = static_cast<double>(m) + cfg.prior_weight;
  kde.mu.push_back(0.5);
  kde.sigma.push_back(cfg.bandwidth_max);
  kde.weight.push_back(cfg.prior_weight / total);
  // kernel widths from neighbor spacing with the prior location included, so
  // edge kernels stay wide toward unexplored space; the floor loosens for
  // small sets (little evidence, keep exploring) and tightens as they grow
  const double floor =
      std::max(cfg.bandwidth_floor, 1.0 / (1.0 + static_cast<double>(m)));
  std::vector<std::pair<double, bool>> ext;  // (location, is_prior)
  ext.reserve(m + 1);
  for (double c : centers) ext.emplace_back(c, false);
  ext.emplace_back(0.5, true);
  std::stable_sort(ext.begin(), ext.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < ext.size(); ++i) {
    if (ext[i].second) continue;
    const double left = i == 0 ? ext[1].first - ext[0].first : ext[i].first - ext[i - 1].first;
    const double right = i + 1 == ext.size() ? ext[i].first - ext[i - 1].first
                                             : ext[i + 1].first - ext[i].first;
    kde.mu.push_back(ext[i].first);
    kde.sigma.push_back(std::clamp(std::max(left, right), floor, cfg.bandwidth_max));
    kde.weight.push_back(1.0 / total);
  }
  return kde;
}

}  // namespace detail

/// Sequential search maximizing the objective over the space. Trial 1 is the
/// anchor when one is given, followed by n_startup uniform draws, then
/// density-ratio trials: history splits at the gamma quantile into good/bad
/// sets, per-dimension kernel densities are fit to each, and of n_candidates
/// draws from the good density the one maximizing log l(x) - log g(x) is
/// evaluated. Returns the argmax over evaluated trials (ties favor the
/// earlier trial) plus the full history. A space whose ranges are all
/// degenerate is a single point and costs exactly one evaluation.
inline TuneResult tune(const Objective& objective, const SearchSpace& space) {
  if (space.budget < 1) throw Error("tune: budget must be at least 1");
  if (space.params.empty()) throw Error("tune: empty search space");
  if (space.tpe.n_candidates < 1) throw Error("tune: candidate pool must be at least 1");
  if (space.tpe.gamma <= 0.0 || space.tpe.gamma >= 1.0)
    throw Error("tune: gamma must lie in (0, 1)");
  if (space.tpe.bandwidth_floor <= 0.0 || space.tpe.bandwidth_max < space.tpe.bandwidth_floor)
    throw Error("tune: invalid bandwidth bounds");
  for (const auto& p : space.params) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || p.lo > p.hi)
      throw Error("tune: invalid range for parameter \"" + p.name + "\"");
    if (p.log_scale && p.lo <= 0.0)
      throw Error("tune: log-scale parameter \"" + p.name + "\" needs positive bounds");
  }
  const std::size_t dims = space.params.size();
  if (!space.anchor.empty()) {
    if (space.anchor.size() != dims) throw Error("tune: anchor dimension mismatch");
    for (std::size_t d = 0; d < dims; ++d)
      if (space.anchor[d] < space.params[d].lo || space.anchor[d] > space.params[d].hi)
        throw Error("tune: anchor outside bounds for parameter \"" + space.params[d].name + "\"");
  }

  bool single_point = true;
  for (const auto& p : space.params) single_point = single_point && p.lo == p.hi;
  const std::size_t budget = single_point ? 1 : space.budget;

  Rng rng(mix_seed(space.seed, 2));
  TuneResult out;
  out.history.reserve(budget);

  const auto evaluate = [&](std::vector<double> x) {
    TrialRecord rec;
    rec.params = std::move(x);
    rec.trial_index = out.history.size() + 1;
    double s;
    try {
      s = objective(rec.params);
    } catch (const Error&) {
      s = std::numeric_limits<double>::quiet_NaN();
    }
    rec.valid = std::isfinite(s);
    rec.score = rec.valid ? s : std::numeric_limits<double>::quiet_NaN();
    out.history.push_back(std::move(rec));
  };

  if (!space.anchor.empty()) {
    evaluate(space.anchor);
  } else if (single_point) {
    std::vector<double> x(dims);
    for (std::size_t d = 0; d < dims; ++d) x[d] = space.params[d].lo;
    evaluate(std::move(x));
  }

  const std::size_t startup_end =
      std::min(budget, out.history.size() + space.tpe.n_startup);
  while (out.history.size() < startup_end) {
    std::vector<double> x(dims);
    for (std::size_t d = 0; d < dims; ++d)
      x[d] = detail::from_unit(rng.uniform01(), space.params[d]);
    evaluate(std::move(x));
  }

  std::vector<double> cand(dims);
  while (out.history.size() < budget) {
    const std::size_t n = out.history.size();
    if (n < 2) {  // not enough history to split; fall back to a uniform draw
      std::vector<double> x(dims);
      for (std::size_t d = 0; d < dims; ++d)
        x[d] = detail::from_unit(rng.uniform01(), space.params[d]);
      evaluate(std::move(x));
      continue;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double sa = out.history[a].valid ? out.history[a].score
                                             : -std::numeric_limits<double>::infinity();
      const double sb = out.history[b].valid ? out.history[b].score
                                             : -std::numeric_limits<double>::infinity();
      if (sa != sb) return sa > sb;
      return a < b;
    });
    const std::size_t n_good = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(space.tpe.gamma * static_cast<double>(n))), 1, n - 1);

    std::vector<detail::UnitKde> good(dims), bad(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      std::vector<double> gu, bu;
      gu.reserve(n_good);
      bu.reserve(n - n_good);
      for (std::size_t t = 0; t < n; ++t) {
        const double u = detail::to_unit(out.history[order[t]].params[d], space.params[d]);
        (t < n_good ? gu : bu).push_back(u);
      }
      good[d] = detail::build_kde(std::move(gu), space.tpe);
      bad[d] = detail::build_kde(std::move(bu), space.tpe);
    }

    std::vector<double> best_x;
    double best_ratio = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < space.tpe.n_candidates; ++c) {
      double ratio = 0.0;
      for (std::size_t d = 0; d < dims; ++d) {
        const double u = good[d].sample(rng);
        cand[d] = detail::from_unit(u, space.params[d]);
        ratio += std::log(good[d].pdf(u)) - std::log(bad[d].pdf(u));
      }
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best_x = cand;
      }
    }
    evaluate(std::move(best_x));
  }

  const TrialRecord* best = nullptr;
  for (const auto& rec : out.history)
    if (rec.valid && (!best || rec.score > best->score)) best = &rec;
  if (!best) throw Error("tune: objective failed on every trial");
  out.best = *best;
  return out;
}

/// Closure evaluating (h_pos, h_neg) by stratified k-fold cross-validation:
/// mean AUC of the validation folds under models trained on their
/// complements. The fold plan is fixed once per seed so every trial compares
/// on identical splits; training errors (an emptied class, degenerate
/// geometry) surface as NaN, the invalid-trial marker.
inline Objective cv_objective(const Dataset& ds, int k_inner, std::uint64_t seed,
                              const TrainConfig& base = {}) {
  ds.validate_for_training();
  auto data = std::make_shared<Dataset>(ds);
  auto plan = std::make_shared<FoldPlan>(stratified_kfold(ds, k_inner, seed));
  return [data, plan, base, k_inner](std::span<const double> params) -> double {
    if (params.size() != 2) throw Error("cv_objective: expected exactly (h_pos, h_neg)");
    TrainConfig cfg = base;
    cfg.h_pos = params[0];
    cfg.h_neg = params[1];
    double total = 0.0;
    for (int f = 0; f < k_inner; ++f) {
      const Dataset tr = data->subset(plan->complement_indices(f));
      const Dataset va = data->subset(plan->fold_indices(f));
      try {
        const ChipclassModel model = train(tr, cfg);
        const auto probs = predict_proba_batch(va, model);
        total += auc(probs, va.labels);
      } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    }
    return total / static_cast<double>(k_inner);
  };
}

}  // namespace ggclf
