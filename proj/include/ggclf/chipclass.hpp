#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ggclf/dataset.hpp"
#include "ggclf/gabriel_graph.hpp"
#include "ggclf/quality.hpp"

namespace ggclf {

/// A graph edge whose endpoints carry opposite labels. Its perpendicular
/// bisector through the midpoint is one local max-margin hyperplane.
struct SupportEdge {
  std::vector<double> ssv_pos;
  std::vector<double> ssv_neg;
  std::vector<double> midpoint;
};

struct ChipclassModel {
  std::size_t dimension = 0;
  std::vector<SupportEdge> edges;
  double h_pos = 1.0, h_neg = 1.0;
  double theta_pos = 0.0, theta_neg = 0.0;
  ZScoreParams normalization;  // identity when training was unnormalized
  bool filter_enabled = true;
  std::uint64_t seed = 0;
  std::string data_hash;
};

/// One SupportEdge per opposite-class graph edge. The positive endpoint is
/// always stored first, the midpoint is the coordinate average.
inline std::vector<SupportEdge> extract_support_edges(const GabrielGraph& g, const Dataset& ds) {
  if (g.n != ds.rows) throw Error("extract_support_edges: graph and dataset sizes disagree");
  std::vector<SupportEdge> out;
  for (const auto& [i, j] : g.edges) {
    if (ds.labels[i] == ds.labels[j]) continue;
    const std::size_t p = ds.labels[i] == kPositive ? i : j;
    const std::size_t n = p == i ? j : i;
    SupportEdge se;
    se.ssv_pos.assign(ds.row(p).begin(), ds.row(p).end());
    se.ssv_neg.assign(ds.row(n).begin(), ds.row(n).end());
    se.midpoint.resize(ds.cols);
    for (std::size_t c = 0; c < ds.cols; ++c) se.midpoint[c] = (se.ssv_pos[c] + se.ssv_neg[c]) / 2.0;
    out.push_back(std::move(se));
  }
  // a connected graph with both classes present always crosses classes somewhere
  if (out.empty()) throw Error("no support edges: classes do not meet in the graph");
  return out;
}

struct TrainConfig {
  double h_pos = 1.0;
  double h_neg = 1.0;
  bool enable_filter = true;
  bool normalize = true;
  enum class Rule { Flexible, Fixed };
  Rule rule = Rule::Flexible;  // Fixed ignores h and applies q < theta directly
  bool drop_duplicates = false;  // collapse exact repeat rows before building the graph
  std::uint64_t seed = 0;
};

/// Full training pipeline: optional z-scoring, graph construction, quality
/// index and per-class thresholds, one filtering pass with rebuild, then
/// support-edge extraction from the surviving graph.
inline ChipclassModel train(const Dataset& ds, const TrainConfig& cfg = {}) {
  ds.validate_for_training();
  ChipclassModel model;
  model.dimension = ds.cols;
  model.filter_enabled = cfg.enable_filter;
  model.seed = cfg.seed;
  model.data_hash = dataset_hash(ds);

  Dataset work = cfg.drop_duplicates ? deduplicate_rows(ds) : ds;
  if (cfg.drop_duplicates) work.validate_for_training();
  if (cfg.normalize) {
    auto [normalized, params] = normalize_zscore(work);
    work = std::move(normalized);
    model.normalization = std::move(params);
  } else {
    model.normalization = ZScoreParams::identity(ds.cols);
  }

  const GabrielGraph graph = build_gabriel(work.points());
  const auto q = quality_index(graph, work.labels);
  const auto theta = class_thresholds(q, work.labels);
  model.theta_pos = theta.first;
  model.theta_neg = theta.second;

  if (cfg.rule == TrainConfig::Rule::Fixed) {
    model.h_pos = 1.0;
    model.h_neg = 1.0;
    if (cfg.enable_filter) {
      const FilterResult f = fixed_filter(work, graph, q, theta);
      model.edges = extract_support_edges(f.filtered_graph, f.filtered);
      return model;
    }
  } else {
    model.h_pos = cfg.h_pos;
    model.h_neg = cfg.h_neg;
    if (cfg.enable_filter) {
      const FilterResult f = flexible_filter(work, graph, q, theta, {cfg.h_pos, cfg.h_neg});
      model.edges = extract_support_edges(f.filtered_graph, f.filtered);
      return model;
    }
  }
  model.edges = extract_support_edges(graph, work);
  return model;
}

/// Gating weights over the model's hyperplanes for a test point already in
/// model space, normalized to sum 1. The raw weight is exp(Dmax^2/d(x,p_k))
/// with Dmax the largest midpoint distance; only exponent differences matter
/// for the normalized vector, so the maximum exponent is subtracted before
/// exponentiating. A zero midpoint distance takes the entire mass (split
/// evenly if several midpoints coincide with x).
inline std::vector<double> gating_weights(std::span<const double> x, const ChipclassModel& model) {
  const std::size_t H = model.edges.size();
  std::vector<double> delta(H);
  double d_max = 0.0;
  std::size_t zero_count = 0;
  for (std::size_t k = 0; k < H; ++k) {
    delta[k] = distance(x, model.edges[k].midpoint);
    d_max = std::max(d_max, delta[k]);
    if (delta[k] == 0.0) ++zero_count;
  }
  std::vector<double> w(H, 0.0);
  if (zero_count > 0) {
    for (std::size_t k = 0; k < H; ++k)
      if (delta[k] == 0.0) w[k] = 1.0 / static_cast<double>(zero_count);
    return w;
  }
  std::vector<double> expo(H);
  double e_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < H; ++k) {
    expo[k] = d_max * d_max / delta[k];
    e_max = std::max(e_max, expo[k]);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < H; ++k) {
    w[k] = std::exp(expo[k] - e_max);
    sum += w[k];
  }
  for (auto& v : w) v /= sum;
  return w;
}

/// p(y = positive | x) for a raw-space test point. Each hyperplane's gating
/// weight accrues to the class of its nearer structural support vector; an
/// exact tie splits the weight evenly.
inline double predict_proba(std::span<const double> x, const ChipclassModel& model) {
  if (x.size() != model.dimension)
    throw Error("predict: point has " + std::to_string(x.size()) + " features, model expects " +
                std::to_string(model.dimension));
  const std::vector<double> z = model.normalization.applied(x);
  const std::vector<double> w = gating_weights(z, model);
  double w_pos = 0.0, w_neg = 0.0;
  for (std::size_t k = 0; k < model.edges.size(); ++k) {
    const double dp = squared_distance(z, model.edges[k].ssv_pos);
    const double dn = squared_distance(z, model.edges[k].ssv_neg);
    if (dp < dn) {
      w_pos += w[k];
    } else if (dn < dp) {
      w_neg += w[k];
    } else {
      w_pos += w[k] / 2.0;
      w_neg += w[k] / 2.0;
    }
  }
  return w_pos / (w_pos + w_neg);
}

/// Decision rule: positive iff the positive mass is at least the negative mass.
inline int predict(std::span<const double> x, const ChipclassModel& model) {
  return predict_proba(x, model) >= 0.5 ? kPositive : kNegative;
}

inline std::vector<double> predict_proba_batch(const Dataset& ds, const ChipclassModel& model) {
  std::vector<double> out(ds.rows);
  for (std::size_t i = 0; i < ds.rows; ++i) out[i] = predict_proba(ds.row(i), model);
  return out;
}

}  // namespace ggclf
