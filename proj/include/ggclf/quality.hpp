#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ggclf/dataset.hpp"
#include "ggclf/gabriel_graph.hpp"

namespace ggclf {

/// Per-sample quality index: the fraction of a vertex's graph neighbors that
/// share its class. 0 marks a likely outlier, 1 a point deep inside its class.
inline std::vector<double> quality_index(const GabrielGraph& g, const std::vector<int>& labels) {
  if (g.n != labels.size())
    throw Error("quality_index: graph has " + std::to_string(g.n) + " vertices but " +
                std::to_string(labels.size()) + " labels given");
  std::vector<double> q(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const auto& nb = g.neighbors[i];
    if (nb.empty()) throw Error("quality_index: vertex " + std::to_string(i) + " is isolated");
    std::size_t same = 0;
    for (std::size_t j : nb)
      if (labels[j] == labels[i]) ++same;
    q[i] = static_cast<double>(same) / static_cast<double>(nb.size());
  }
  return q;
}

/// Per-class means of the quality index: (theta_pos, theta_neg).
inline std::pair<double, double> class_thresholds(const std::vector<double>& q,
                                                  const std::vector<int>& labels) {
  double sum_pos = 0.0, sum_neg = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (labels[i] == kPositive) {
      sum_pos += q[i];
      ++n_pos;
    } else {
      sum_neg += q[i];
      ++n_neg;
    }
  }
  if (n_pos == 0 || n_neg == 0) throw Error("class_thresholds: both classes must be present");
  return {sum_pos / static_cast<double>(n_pos), sum_neg / static_cast<double>(n_neg)};
}

/// Removal mask for the flexible rule: sample i goes iff
/// h_class(i) * q_i < theta_class(i), strict. h = (1,1) recovers the fixed rule.
inline std::vector<bool> removal_mask(const std::vector<double>& q, const std::vector<int>& labels,
                                      std::pair<double, double> theta, std::pair<double, double> h) {
  if (h.first <= 0.0 || h.second <= 0.0) throw Error("h multipliers must be positive");
  std::vector<bool> removed(q.size(), false);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const bool pos = labels[i] == kPositive;
    const double hi = pos ? h.first : h.second;
    const double th = pos ? theta.first : theta.second;
    removed[i] = hi * q[i] < th;
  }
  return removed;
}

struct FilterResult {
  std::vector<std::size_t> kept;    // sorted indices into the original dataset
  std::vector<std::size_t> removed; // complement, sorted
  Dataset filtered;
  GabrielGraph filtered_graph;      // rebuilt on the kept samples
};

namespace detail {

inline FilterResult finish_filter(const Dataset& ds, const std::vector<bool>& removed_mask,
                                  const char* rule) {
  FilterResult out;
  std::size_t kept_pos = 0, kept_neg = 0;
  for (std::size_t i = 0; i < ds.rows; ++i) {
    if (removed_mask[i]) {
      out.removed.push_back(i);
    } else {
      out.kept.push_back(i);
      (ds.labels[i] == kPositive ? kept_pos : kept_neg)++;
    }
  }
  if (kept_pos == 0 || kept_neg == 0) {
    const std::size_t total_pos = ds.count(kPositive);
    const std::size_t total_neg = ds.count(kNegative);
    throw Error(std::string(rule) + " filtering would empty the " +
                (kept_pos == 0 ? "positive" : "negative") + " class (kept " +
                std::to_string(kept_pos) + "/" + std::to_string(total_pos) + " positives, " +
                std::to_string(kept_neg) + "/" + std::to_string(total_neg) + " negatives)");
  }
  out.filtered = ds.subset(out.kept);
  out.filtered_graph = build_gabriel(out.filtered.points());
  return out;
}

}  // namespace detail

/// One filtering pass under the flexible rule, then one graph rebuild on the
/// kept samples. Thresholds are taken as computed on the pre-filter graph; no
/// fixpoint iteration.
inline FilterResult flexible_filter(const Dataset& ds, const GabrielGraph& g,
                                    const std::vector<double>& q, std::pair<double, double> theta,
                                    std::pair<double, double> h) {
  if (g.n != ds.rows || q.size() != ds.rows)
    throw Error("flexible_filter: dataset, graph and q sizes disagree");
  return detail::finish_filter(ds, removal_mask(q, ds.labels, theta, h), "flexible");
}

/// The original fixed-threshold rule, q_i < theta_class(i), kept as its own
/// code path so the two formulations can be checked against each other.
inline FilterResult fixed_filter(const Dataset& ds, const GabrielGraph& g,
                                 const std::vector<double>& q, std::pair<double, double> theta) {
  if (g.n != ds.rows || q.size() != ds.rows)
    throw Error("fixed_filter: dataset, graph and q sizes disagree");
  std::vector<bool> removed(ds.rows, false);
  for (std::size_t i = 0; i < ds.rows; ++i) {
    const double th = ds.labels[i] == kPositive ? theta.first : theta.second;
    removed[i] = q[i] < th;
  }
  return detail::finish_filter(ds, removed, "fixed");
}

}  // namespace ggclf
