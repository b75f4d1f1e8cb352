#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ggclf/dataset.hpp"
#include "ggclf/gabriel_graph.hpp"
#include "ggclf/quality.hpp"

namespace ggclf {

/// Per-sample margin M_i = (d_miss - d_hit) / d_miss, where d_miss and d_hit
/// are the distances to the nearest opposite-class and same-class samples.
/// At most 1; negative when the nearest miss is closer than the nearest hit.
inline double sample_margin(std::size_t i, const Dataset& ds) {
  double hit2 = std::numeric_limits<double>::infinity();
  double miss2 = std::numeric_limits<double>::infinity();
  const auto xi = ds.row(i);
  for (std::size_t j = 0; j < ds.rows; ++j) {
    if (j == i) continue;
    const double d2 = squared_distance(xi, ds.row(j));
    if (ds.labels[j] == ds.labels[i]) {
      hit2 = std::min(hit2, d2);
    } else {
      miss2 = std::min(miss2, d2);
    }
  }
  if (std::isinf(hit2))
    throw Error("sample_margin: sample " + std::to_string(i) + " is the only member of its class");
  if (std::isinf(miss2)) throw Error("sample_margin: no opposite-class sample exists");
  const double miss = std::sqrt(miss2);
  const double hit = std::sqrt(hit2);
  if (miss == 0.0)
    throw Error("sample_margin: sample " + std::to_string(i) + " duplicated in the opposite class");
  return (miss - hit) / miss;
}

/// Margins over a whole dataset plus the two-term split of their mean for a
/// kept/removed partition: mean_all * m = kept_count * mean_kept +
/// removed_count * removed_contribution. All margins here use the full
/// dataset as the neighbor universe; to measure margins after samples are
/// actually removed, call mean_margin on the filtered dataset itself.
struct MarginReport {
  std::vector<double> per_sample;
  double mean_all = 0.0;
  double mean_kept = 0.0;              // mean over the restriction set
  double removed_contribution = 0.0;   // mean over its complement
  std::size_t kept_count = 0;
  std::size_t removed_count = 0;
};

inline MarginReport mean_margin(const Dataset& ds,
                                const std::vector<std::size_t>* restrict_to = nullptr) {
  MarginReport rep;
  rep.per_sample.resize(ds.rows);
  double total = 0.0;
  for (std::size_t i = 0; i < ds.rows; ++i) {
    rep.per_sample[i] = sample_margin(i, ds);
    total += rep.per_sample[i];
  }
  rep.mean_all = total / static_cast<double>(ds.rows);
  if (restrict_to) {
    if (restrict_to->empty()) throw Error("mean_margin: empty restriction set");
    std::vector<bool> in(ds.rows, false);
    for (std::size_t i : *restrict_to) in[i] = true;
    double kept_sum = 0.0, removed_sum = 0.0;
    for (std::size_t i = 0; i < ds.rows; ++i) (in[i] ? kept_sum : removed_sum) += rep.per_sample[i];
    rep.kept_count = restrict_to->size();
    rep.removed_count = ds.rows - rep.kept_count;
    rep.mean_kept = kept_sum / static_cast<double>(rep.kept_count);
    rep.removed_contribution =
        rep.removed_count == 0 ? 0.0 : removed_sum / static_cast<double>(rep.removed_count);
  } else {
    rep.kept_count = ds.rows;
    rep.mean_kept = rep.mean_all;
  }
  return rep;
}

/// Log-spaced grid of `count` values over [lo, hi]. With symmetric bounds
/// (hi == 1/lo) and an odd count the center value is exactly 1.
inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (lo <= 0.0 || hi < lo || count < 1) throw Error("log_grid: invalid range");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  const double ratio = hi / lo;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    g[i] = lo * std::pow(ratio, t);
  }
  // pin the midpoint of a reciprocal range to exactly 1
  if (count % 2 == 1 && std::abs(lo * hi - 1.0) < 1e-12) g[count / 2] = 1.0;
  return g;
}

/// Mean kept-sample margin as a function of the per-class multipliers. The
/// quality index and thresholds come from the single pre-filter graph; each
/// cell filters with its (h_pos, h_neg) and measures margins within the kept
/// samples only. Cells whose filter empties a class hold NaN.
struct MarginSurface {
  std::vector<double> h_pos_grid;
  std::vector<double> h_neg_grid;
  std::vector<double> mean_margin;    // row-major: h_pos index * |h_neg| + h_neg index
  std::vector<std::size_t> kept_count;

  double cell(std::size_t i, std::size_t j) const { return mean_margin[i * h_neg_grid.size() + j]; }
};

inline MarginSurface margin_surface(const Dataset& ds, std::span<const double> h_pos_grid,
                                    std::span<const double> h_neg_grid) {
  ds.validate_for_training();
  for (double h : h_pos_grid)
    if (h <= 0.0) throw Error("margin_surface: grid values must be positive");
  for (double h : h_neg_grid)
    if (h <= 0.0) throw Error("margin_surface: grid values must be positive");

  const GabrielGraph graph = build_gabriel(ds.points());
  const auto q = quality_index(graph, ds.labels);
  const auto theta = class_thresholds(q, ds.labels);

  MarginSurface surf;
  surf.h_pos_grid.assign(h_pos_grid.begin(), h_pos_grid.end());
  surf.h_neg_grid.assign(h_neg_grid.begin(), h_neg_grid.end());
  surf.mean_margin.assign(h_pos_grid.size() * h_neg_grid.size(),
                          std::numeric_limits<double>::quiet_NaN());
  surf.kept_count.assign(surf.mean_margin.size(), 0);

  for (std::size_t a = 0; a < h_pos_grid.size(); ++a) {
    for (std::size_t b = 0; b < h_neg_grid.size(); ++b) {
      const auto mask = removal_mask(q, ds.labels, theta, {h_pos_grid[a], h_neg_grid[b]});
      std::vector<std::size_t> kept;
      std::size_t kept_pos = 0, kept_neg = 0;
      for (std::size_t i = 0; i < ds.rows; ++i) {
        if (!mask[i]) {
          kept.push_back(i);
          (ds.labels[i] == kPositive ? kept_pos : kept_neg)++;
        }
      }
      const std::size_t idx = a * h_neg_grid.size() + b;
      surf.kept_count[idx] = kept.size();
      if (kept_pos == 0 || kept_neg == 0) continue;  // undefined cell
      const Dataset sub = ds.subset(kept);
      surf.mean_margin[idx] = mean_margin(sub).mean_all;
    }
  }
  return surf;
}

/// One margin-vs-variance experiment row: two Gaussian clouds at the given
/// marginal variance, the dataset-wide mean margin, the mean margin after the
/// fixed-threshold filter (margins recomputed among kept samples), and the
/// mean quality index. Graph-based columns are NaN when the geometry is
/// degenerate (coincident points at variance 0) or when filtering would empty
/// a class.
struct MarginCurveRow {
  double variance = 0.0;
  double mean_unfiltered = 0.0;
  double mean_filtered = 0.0;
  double mean_quality = 0.0;
};

inline std::vector<MarginCurveRow> margin_curve(std::span<const double> variances,
                                                std::size_t n_per_class, std::uint64_t seed,
                                                std::span<const double, 2> mu0,
                                                std::span<const double, 2> mu1) {
  std::vector<MarginCurveRow> rows;
  rows.reserve(variances.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t v = 0; v < variances.size(); ++v) {
    const Dataset ds = gen_gaussian_pair(mu0, mu1, variances[v], n_per_class, mix_seed(seed, v));
    MarginCurveRow row;
    row.variance = variances[v];
    row.mean_unfiltered = mean_margin(ds).mean_all;
    row.mean_filtered = nan;
    row.mean_quality = nan;
    if (!find_duplicate_points(ds.points())) {
      const GabrielGraph graph = build_gabriel(ds.points());
      const auto q = quality_index(graph, ds.labels);
      double qs = 0.0;
      for (double qi : q) qs += qi;
      row.mean_quality = qs / static_cast<double>(q.size());
      const auto theta = class_thresholds(q, ds.labels);
      try {
        const auto mask = removal_mask(q, ds.labels, theta, {1.0, 1.0});
        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < ds.rows; ++i)
          if (!mask[i]) kept.push_back(i);
        const Dataset sub = ds.subset(kept);
        sub.validate_for_training();
        row.mean_filtered = mean_margin(sub).mean_all;
      } catch (const Error&) {
        // leave NaN
      }
    }
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<MarginCurveRow> margin_curve(std::span<const double> variances,
                                                std::size_t n_per_class, std::uint64_t seed) {
  const double mu0[2] = {3.0, 3.0};
  const double mu1[2] = {5.0, 5.0};
  return margin_curve(variances, n_per_class, seed, std::span<const double, 2>(mu0, 2),
                      std::span<const double, 2>(mu1, 2));
}

}  // namespace ggclf
