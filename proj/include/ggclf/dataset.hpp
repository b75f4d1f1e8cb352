#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ggclf/common.hpp"
#include "ggclf/random.hpp"

namespace ggclf {

constexpr int kPositive = +1;
constexpr int kNegative = -1;

/// Binary-classification dataset: m samples of d features plus +1/-1 labels.
/// Immutable after construction by convention; all operations return copies.
struct Dataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major, rows * cols
  std::vector<int> labels;     // kPositive / kNegative
  std::vector<std::string> feature_names;  // empty or size cols
  std::string positive_name = "+1";
  std::string negative_name = "-1";

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  Points points() const { return {values.data(), rows, cols}; }

  std::size_t count(int label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
  }

  /// Subset by row indices, order preserved.
  Dataset subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.cols = cols;
    out.rows = indices.size();
    out.values.reserve(out.rows * cols);
    out.labels.reserve(out.rows);
    for (std::size_t i : indices) {
      const auto r = row(i);
      out.values.insert(out.values.end(), r.begin(), r.end());
      out.labels.push_back(labels[i]);
    }
    out.feature_names = feature_names;
    out.positive_name = positive_name;
    out.negative_name = negative_name;
    return out;
  }

  void validate_for_training() const {
    if (rows < 2) throw Error("dataset needs at least 2 samples, got " + std::to_string(rows));
    if (cols < 1) throw Error("dataset needs at least 1 feature");
    if (count(kPositive) == 0 || count(kNegative) == 0)
      throw Error("both classes must be present for training (positives: " +
                  std::to_string(count(kPositive)) + ", negatives: " + std::to_string(count(kNegative)) + ")");
  }
};

/// Keeps the first occurrence of each exact feature vector (bitwise
/// equality), dropping later repeats regardless of label. Collapsing a point
/// that appears under both labels keeps the earlier row's label.
inline Dataset deduplicate_rows(const Dataset& ds) {
  std::vector<std::size_t> kept;
  kept.reserve(ds.rows);
  for (std::size_t i = 0; i < ds.rows; ++i) {
    bool seen = false;
    const auto ri = ds.row(i);
    for (std::size_t j : kept) {
      if (std::equal(ri.begin(), ri.end(), ds.row(j).begin())) {
        seen = true;
        break;
      }
    }
    if (!seen) kept.push_back(i);
  }
  if (kept.size() == ds.rows) return ds;
  return ds.subset(kept);
}

/// Content digest over dimensions, feature bits and labels.
inline std::string dataset_hash(const Dataset& ds) {
  std::uint64_t h = fnv1a(&ds.rows, sizeof(ds.rows));
  h = fnv1a(&ds.cols, sizeof(ds.cols), h);
  h = fnv1a(ds.values.data(), ds.values.size() * sizeof(double), h);
  h = fnv1a(ds.labels.data(), ds.labels.size() * sizeof(int), h);
  return to_hex(h);
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

inline std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;  // from_chars rejects a leading '+'
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

struct CsvFormat {
  char delimiter = ',';
  enum class Header { Auto, Yes, No };
  Header header = Header::Auto;
};

/// Loads a delimited text file into a Dataset. The label column is selected by
/// header name or by 0-based index; `positive_label` names which of the two
/// observed label values maps to +1. Row/column positions in error messages
/// are 1-based file coordinates.
inline Dataset load_csv(const std::string& path, const std::string& label_column,
                        const std::string& positive_label, const CsvFormat& fmt = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);

  std::vector<std::vector<std::string>> table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    table.push_back(detail::split_line(line, fmt.delimiter));
  }
  if (table.empty()) throw Error("empty file: " + path);

  const std::size_t width = table[0].size();
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (table[r].size() != width)
      throw Error(path + ": row " + std::to_string(r + 1) + " has " + std::to_string(table[r].size()) +
                  " cells, expected " + std::to_string(width));
  }

  bool has_header = false;
  switch (fmt.header) {
    case CsvFormat::Header::Yes: has_header = true; break;
    case CsvFormat::Header::No: has_header = false; break;
    case CsvFormat::Header::Auto:
      // header row iff any first-row cell is not numeric
      for (const auto& cell : table[0]) {
        if (!detail::parse_double(cell)) { has_header = true; break; }
      }
      break;
  }

  std::vector<std::string> header;
  if (has_header) {
    header = table[0];
    table.erase(table.begin());
    if (table.empty()) throw Error(path + ": no data rows after header");
  }

  // resolve label column: name first, then 0-based index
  std::size_t label_idx = width;
  if (has_header) {
    const auto it = std::find(header.begin(), header.end(), detail::trim(label_column));
    if (it != header.end()) label_idx = static_cast<std::size_t>(it - header.begin());
  }
  if (label_idx == width) {
    int idx = -1;
    const auto lc = detail::trim(label_column);
    const auto [ptr, ec] = std::from_chars(lc.data(), lc.data() + lc.size(), idx);
    if (ec == std::errc() && ptr == lc.data() + lc.size() && idx >= 0 && static_cast<std::size_t>(idx) < width) {
      label_idx = static_cast<std::size_t>(idx);
    } else {
      throw Error(path + ": label column '" + label_column + "' not found");
    }
  }

  Dataset ds;
  ds.cols = width - 1;
  if (ds.cols == 0) throw Error(path + ": no feature columns besides the label");
  ds.rows = table.size();
  ds.values.reserve(ds.rows * ds.cols);
  ds.labels.reserve(ds.rows);
  if (has_header) {
    for (std::size_t c = 0; c < width; ++c)
      if (c != label_idx) ds.feature_names.push_back(header[c]);
  }

  std::vector<std::string> raw_labels;
  raw_labels.reserve(ds.rows);
  const std::size_t first_data_line = has_header ? 2 : 1;
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_idx) {
        raw_labels.push_back(table[r][c]);
        continue;
      }
      const auto v = detail::parse_double(table[r][c]);
      if (!v)
        throw Error(path + ": cell at row " + std::to_string(r + first_data_line) + ", column " +
                    std::to_string(c + 1) + " is not a finite number: '" + table[r][c] + "'");
      ds.values.push_back(*v);
    }
  }

  // exactly two distinct label values, one of which is positive_label
  std::vector<std::string> distinct;
  for (const auto& l : raw_labels)
    if (std::find(distinct.begin(), distinct.end(), l) == distinct.end()) distinct.push_back(l);
  const std::string pos = detail::trim(positive_label);
  if (distinct.size() == 1)
    throw Error(path + ": single-class file, only label '" + distinct[0] + "' present");
  if (distinct.size() > 2) {
    std::string seen;
    for (const auto& d : distinct) seen += (seen.empty() ? "'" : ", '") + d + "'";
    throw Error(path + ": expected exactly two label values, found " + std::to_string(distinct.size()) +
                ": " + seen);
  }
  if (distinct[0] != pos && distinct[1] != pos)
    throw Error(path + ": positive label '" + positive_label + "' not among observed labels '" +
                distinct[0] + "', '" + distinct[1] + "'");

  ds.positive_name = pos;
  ds.negative_name = (distinct[0] == pos) ? distinct[1] : distinct[0];
  for (const auto& l : raw_labels) ds.labels.push_back(l == pos ? kPositive : kNegative);
  return ds;
}

/// Writes a Dataset in the load_csv format. Feature values round-trip
/// bit-exactly ("%.17g").
inline void save_csv(const Dataset& ds, const std::string& path, const CsvFormat& fmt = {},
                     const std::string& label_name = "label") {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  const char d = fmt.delimiter;
  if (!ds.feature_names.empty()) {
    for (std::size_t c = 0; c < ds.cols; ++c) out << ds.feature_names[c] << d;
    out << label_name << '\n';
  }
  char buf[32];
  for (std::size_t r = 0; r < ds.rows; ++r) {
    for (std::size_t c = 0; c < ds.cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", ds.values[r * ds.cols + c]);
      out << buf << d;
    }
    out << (ds.labels[r] == kPositive ? ds.positive_name : ds.negative_name) << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

/// Feature rows without labels, for scoring fresh data.
struct FeatureTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  std::vector<std::string> column_names;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  Points points() const { return {values.data(), rows, cols}; }
};

/// Loads every column of a delimited file as a feature, except an optional
/// `skip_column` (header name or 0-based index) that is ignored, e.g. a label
/// column present in the file.
inline FeatureTable load_csv_features(const std::string& path, const CsvFormat& fmt = {},
                                      const std::string& skip_column = "") {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);

  std::vector<std::vector<std::string>> table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    table.push_back(detail::split_line(line, fmt.delimiter));
  }
  if (table.empty()) throw Error("empty file: " + path);

  const std::size_t width = table[0].size();
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (table[r].size() != width)
      throw Error(path + ": row " + std::to_string(r + 1) + " has " + std::to_string(table[r].size()) +
                  " cells, expected " + std::to_string(width));
  }

  bool has_header = false;
  switch (fmt.header) {
    case CsvFormat::Header::Yes: has_header = true; break;
    case CsvFormat::Header::No: has_header = false; break;
    case CsvFormat::Header::Auto:
      for (const auto& cell : table[0]) {
        if (!detail::parse_double(cell)) { has_header = true; break; }
      }
      break;
  }
  std::vector<std::string> header;
  if (has_header) {
    header = table[0];
    table.erase(table.begin());
    if (table.empty()) throw Error(path + ": no data rows after header");
  }

  std::size_t skip_idx = width;  // width means "none"
  if (!skip_column.empty()) {
    const auto sc = detail::trim(skip_column);
    if (has_header) {
      const auto it = std::find(header.begin(), header.end(), sc);
      if (it != header.end()) skip_idx = static_cast<std::size_t>(it - header.begin());
    }
    if (skip_idx == width) {
      int idx = -1;
      const auto [ptr, ec] = std::from_chars(sc.data(), sc.data() + sc.size(), idx);
      if (ec == std::errc() && ptr == sc.data() + sc.size() && idx >= 0 &&
          static_cast<std::size_t>(idx) < width) {
        skip_idx = static_cast<std::size_t>(idx);
      } else {
        throw Error(path + ": column '" + skip_column + "' not found");
      }
    }
  }

  FeatureTable ft;
  ft.cols = width - (skip_idx < width ? 1 : 0);
  if (ft.cols == 0) throw Error(path + ": no feature columns");
  ft.rows = table.size();
  ft.values.reserve(ft.rows * ft.cols);
  if (has_header) {
    for (std::size_t c = 0; c < width; ++c)
      if (c != skip_idx) ft.column_names.push_back(header[c]);
  }
  const std::size_t first_data_line = has_header ? 2 : 1;
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (c == skip_idx) continue;
      const auto v = detail::parse_double(table[r][c]);
      if (!v)
        throw Error(path + ": cell at row " + std::to_string(r + first_data_line) + ", column " +
                    std::to_string(c + 1) + " is not a finite number: '" + table[r][c] + "'");
      ft.values.push_back(*v);
    }
  }
  return ft;
}

/// Per-feature standardization parameters. Population convention (divide by m).
/// Features that were constant in training keep stddev 0 here and are scaled
/// by 1 when applied, so training rows map to exactly 0.
struct ZScoreParams {
  std::vector<double> mean;
  std::vector<double> stddev;

  bool empty() const { return mean.empty(); }

  void apply(std::span<double> x) const {
    for (std::size_t c = 0; c < x.size(); ++c) {
      const double s = stddev[c] == 0.0 ? 1.0 : stddev[c];
      x[c] = (x[c] - mean[c]) / s;
    }
  }

  std::vector<double> applied(std::span<const double> x) const {
    std::vector<double> out(x.begin(), x.end());
    apply(out);
    return out;
  }

  static ZScoreParams identity(std::size_t cols) {
    ZScoreParams p;
    p.mean.assign(cols, 0.0);
    p.stddev.assign(cols, 1.0);
    return p;
  }
};

inline Dataset apply_zscore(const Dataset& ds, const ZScoreParams& p) {
  Dataset out = ds;
  for (std::size_t r = 0; r < out.rows; ++r)
    p.apply(std::span<double>(out.values.data() + r * out.cols, out.cols));
  return out;
}

inline std::pair<Dataset, ZScoreParams> normalize_zscore(const Dataset& ds) {
  if (ds.rows < 2) throw Error("normalize_zscore needs at least 2 samples");
  ZScoreParams p;
  p.mean.assign(ds.cols, 0.0);
  p.stddev.assign(ds.cols, 0.0);
  const double m = static_cast<double>(ds.rows);
  for (std::size_t r = 0; r < ds.rows; ++r)
    for (std::size_t c = 0; c < ds.cols; ++c) p.mean[c] += ds.values[r * ds.cols + c];
  for (std::size_t c = 0; c < ds.cols; ++c) p.mean[c] /= m;
  for (std::size_t r = 0; r < ds.rows; ++r)
    for (std::size_t c = 0; c < ds.cols; ++c) {
      const double d = ds.values[r * ds.cols + c] - p.mean[c];
      p.stddev[c] += d * d;
    }
  for (std::size_t c = 0; c < ds.cols; ++c) p.stddev[c] = std::sqrt(p.stddev[c] / m);
  return {apply_zscore(ds, p), p};
}

/// Two spherical Gaussian clouds in the plane: n_per_class samples around mu0
/// labeled -1 followed by n_per_class around mu1 labeled +1. Deterministic for
/// a given seed.
inline Dataset gen_gaussian_pair(std::span<const double, 2> mu0, std::span<const double, 2> mu1,
                                 double variance, std::size_t n_per_class, std::uint64_t seed) {
  if (variance < 0.0) throw Error("variance must be nonnegative");
  if (n_per_class < 1) throw Error("n_per_class must be at least 1");
  const double sd = std::sqrt(variance);
  Rng rng(mix_seed(seed, 0));
  Dataset ds;
  ds.cols = 2;
  ds.rows = 2 * n_per_class;
  ds.values.reserve(ds.rows * 2);
  ds.labels.reserve(ds.rows);
  for (std::size_t i = 0; i < n_per_class; ++i) {
    ds.values.push_back(mu0[0] + sd * rng.normal());
    ds.values.push_back(mu0[1] + sd * rng.normal());
    ds.labels.push_back(kNegative);
  }
  for (std::size_t i = 0; i < n_per_class; ++i) {
    ds.values.push_back(mu1[0] + sd * rng.normal());
    ds.values.push_back(mu1[1] + sd * rng.normal());
    ds.labels.push_back(kPositive);
  }
  return ds;
}

inline Dataset gen_gaussian_pair(std::initializer_list<double> mu0, std::initializer_list<double> mu1,
                                 double variance, std::size_t n_per_class, std::uint64_t seed) {
  return gen_gaussian_pair(std::span<const double, 2>(mu0.begin(), 2),
                           std::span<const double, 2>(mu1.begin(), 2), variance, n_per_class, seed);
}

/// Stratified fold assignment: within each class the per-fold counts differ by
/// at most one from the exact proportional share.
struct FoldPlan {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<int> assignments;  // size m, values in [0, k)

  std::vector<std::size_t> fold_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
      if (assignments[i] == fold) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> complement_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
      if (assignments[i] != fold) out.push_back(i);
    return out;
  }
};

inline FoldPlan stratified_kfold(const Dataset& ds, int k, std::uint64_t seed) {
  if (k < 2) throw Error("fold count must be at least 2");
  for (int label : {kPositive, kNegative}) {
    const auto n = ds.count(label);
    if (n < static_cast<std::size_t>(k))
      throw Error("class '" + std::string(label == kPositive ? "positive" : "negative") + "' has " +
                  std::to_string(n) + " samples, fewer than k=" + std::to_string(k));
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(ds.rows, -1);
  Rng rng(mix_seed(seed, 1));
  for (int label : {kPositive, kNegative}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ds.rows; ++i)
      if (ds.labels[i] == label) idx.push_back(i);
    rng.shuffle(idx);
    // random starting fold spreads the remainder samples across folds
    const int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    for (std::size_t t = 0; t < idx.size(); ++t)
      plan.assignments[idx[t]] = static_cast<int>((start + t) % static_cast<std::size_t>(k));
  }
  return plan;
}

}  // namespace ggclf
