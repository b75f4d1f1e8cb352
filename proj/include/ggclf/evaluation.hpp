#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ggclf/common.hpp"
#include "ggclf/dataset.hpp"

namespace ggclf {

namespace detail {

/// Midranks (1-based, ties averaged) of `values` in ascending order.
inline std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace detail

/// Probability that a uniformly random positive outranks a uniformly random
/// negative, ties counted half (rank-sum formulation). Invariant under any
/// strictly increasing transform of the scores.
inline double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error("auc: scores/labels size mismatch");
  if (scores.empty()) throw Error("auc: empty input");
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw Error("auc: non-finite score at index " + std::to_string(i));
    (labels[i] == kPositive ? n_pos : n_neg)++;
  }
  if (n_pos == 0 || n_neg == 0) throw Error("auc: both classes must be present");
  const auto ranks = detail::midranks(scores);
  double rank_sum_pos = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (labels[i] == kPositive) rank_sum_pos += ranks[i];
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum_pos - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

/// Datasets x classifiers matrix of mean test scores. Complete by
/// construction; the score unit (percent or fraction) is whatever the source
/// used and is irrelevant to ranks.
struct ScoreTable {
  std::vector<std::string> datasets;
  std::vector<std::string> classifiers;
  std::vector<double> scores;  // row-major, datasets.size() x classifiers.size()

  std::size_t n() const { return datasets.size(); }
  std::size_t k() const { return classifiers.size(); }
  double at(std::size_t row, std::size_t col) const { return scores[row * k() + col]; }
};

/// Loads a ScoreTable from CSV: header row names the classifiers (first cell
/// labels the dataset column), each following row is a dataset name plus one
/// numeric score per classifier.
inline ScoreTable load_score_table(const std::string& path, char delimiter = ',') {
  std::ifstream in(path);
  if (!in) throw Error("cannot open score table: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("score table is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = detail::split_line(line, delimiter);
  if (header.size() < 2) throw Error("score table needs at least one classifier column: " + path);
  ScoreTable table;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string name = detail::trim(header[c]);
    if (name.empty())
      throw Error(path + ": empty classifier name in column " + std::to_string(c + 1));
    table.classifiers.push_back(name);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_line(line, delimiter);
    if (cells.size() != header.size())
      throw Error(path + ":" + std::to_string(line_no) + ": expected " +
                  std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
    table.datasets.push_back(detail::trim(cells[0]));
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto v = detail::parse_double(detail::trim(cells[c]));
      if (!v)
        throw Error(path + ":" + std::to_string(line_no) + ": column " + std::to_string(c + 1) +
                    ": not a number: \"" + cells[c] + "\"");
      table.scores.push_back(*v);
    }
  }
  if (table.datasets.empty()) throw Error("score table has no data rows: " + path);
  return table;
}

/// Per-classifier average rank across datasets. Within each dataset the best
/// (highest) score gets rank 1; ties share the average of the ranks they
/// span. With no ties anywhere the ranks sum to k(k+1)/2.
inline std::vector<double> average_ranks(const ScoreTable& table) {
  if (table.n() == 0 || table.k() == 0) throw Error("average_ranks: empty table");
  const std::size_t k = table.k();
  std::vector<double> acc(k, 0.0);
  std::vector<double> row(k);
  for (std::size_t d = 0; d < table.n(); ++d) {
    for (std::size_t c = 0; c < k; ++c) row[c] = -table.at(d, c);  // negate: rank 1 = highest
    const auto ranks = detail::midranks(row);
    for (std::size_t c = 0; c < k; ++c) acc[c] += ranks[c];
  }
  for (double& a : acc) a /= static_cast<double>(table.n());
  return acc;
}

struct FriedmanResult {
  double chi2 = 0.0;
  double F = 0.0;
};

/// Friedman statistic over average ranks of k classifiers on N datasets,
/// plus its F-distributed correction with (k-1, (k-1)(N-1)) degrees of
/// freedom: chi2 = [12N/(k(k+1))]*(sum R_j^2 - k(k+1)^2/4),
/// F = (N-1)*chi2 / (N(k-1) - chi2).
inline FriedmanResult friedman_test(std::span<const double> avg_ranks, std::size_t n_datasets) {
  const std::size_t k = avg_ranks.size();
  if (k < 3) throw Error("friedman_test: needs at least 3 classifiers");
  if (n_datasets < 2) throw Error("friedman_test: needs at least 2 datasets");
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n_datasets);
  double sum_sq = 0.0;
  for (double r : avg_ranks) sum_sq += r * r;
  FriedmanResult res;
  res.chi2 = (12.0 * nd / (kd * (kd + 1.0))) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  const double denom = nd * (kd - 1.0) - res.chi2;
  if (denom <= 0.0) throw Error("friedman_test: degenerate statistic, N(k-1) <= chi2");
  res.F = (nd - 1.0) * res.chi2 / denom;
  return res;
}

/// Bonferroni-Dunn critical difference: two average ranks differ
/// significantly when they are more than CD = q_alpha * sqrt(k(k+1)/(6N))
/// apart.
inline double bonferroni_dunn_cd(std::size_t k, std::size_t n_datasets, double q_alpha) {
  if (k < 2) throw Error("bonferroni_dunn_cd: needs at least 2 classifiers");
  if (n_datasets < 1) throw Error("bonferroni_dunn_cd: needs at least 1 dataset");
  if (q_alpha < 0.0) throw Error("bonferroni_dunn_cd: q_alpha must be nonnegative");
  const double kd = static_cast<double>(k);
  return q_alpha * std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n_datasets)));
}

/// Two-tailed Bonferroni-Dunn critical values q_alpha for k classifiers
/// (one control, k-1 comparisons), alpha in {0.05, 0.10}, 2 <= k <= 10.
inline double bonferroni_dunn_q(std::size_t k, double alpha) {
  static constexpr double q05[] = {1.960, 2.241, 2.394, 2.498, 2.576, 2.638, 2.690, 2.724, 2.773};
  static constexpr double q10[] = {1.645, 1.960, 2.128, 2.241, 2.326, 2.394, 2.450, 2.498, 2.539};
  if (k < 2 || k > 10)
    throw Error("bonferroni_dunn_q: tabulated only for 2 <= k <= 10, got k=" + std::to_string(k));
  if (alpha == 0.05) return q05[k - 2];
  if (alpha == 0.10) return q10[k - 2];
  throw Error("bonferroni_dunn_q: tabulated only for alpha 0.05 or 0.10");
}

/// Full rank analysis of a score table at a given q_alpha.
struct RankSummary {
  std::vector<double> average_ranks;
  std::size_t n_datasets = 0;
  std::size_t n_classifiers = 0;
  double friedman_chi2 = 0.0;
  double friedman_F = 0.0;
  double cd = 0.0;
  std::size_t best = 0;                     // index of the lowest average rank
  std::vector<bool> within_cd_of_best;      // per classifier
};

inline RankSummary rank_analysis(const ScoreTable& table, double q_alpha) {
  RankSummary s;
  s.average_ranks = average_ranks(table);
  s.n_datasets = table.n();
  s.n_classifiers = table.k();
  const auto fr = friedman_test(s.average_ranks, s.n_datasets);
  s.friedman_chi2 = fr.chi2;
  s.friedman_F = fr.F;
  s.cd = bonferroni_dunn_cd(s.n_classifiers, s.n_datasets, q_alpha);
  s.best = static_cast<std::size_t>(
      std::min_element(s.average_ranks.begin(), s.average_ranks.end()) - s.average_ranks.begin());
  s.within_cd_of_best.resize(s.n_classifiers);
  for (std::size_t c = 0; c < s.n_classifiers; ++c)
    s.within_cd_of_best[c] = (s.average_ranks[c] - s.average_ranks[s.best]) <= s.cd;
  return s;
}

}  // namespace ggclf
