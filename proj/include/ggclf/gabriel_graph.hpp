#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ggclf/common.hpp"

namespace ggclf {

/// Undirected proximity graph: two points are joined iff no third point lies
/// strictly inside the ball having them as a diameter. Equivalently, edge
/// (i,j) exists iff d(i,k)^2 + d(j,k)^2 >= d(i,j)^2 for every other k; a point
/// exactly on the sphere does not block. Contains the nearest-neighbor graph
/// and the Euclidean minimum spanning tree, hence is connected.
struct GabrielGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, lexicographic
  std::vector<std::vector<std::size_t>> neighbors;         // sorted per vertex

  bool adjacent(std::size_t i, std::size_t j) const {
    const auto& ni = neighbors[i];
    return std::binary_search(ni.begin(), ni.end(), j);
  }

  std::size_t degree(std::size_t i) const { return neighbors[i].size(); }
};

/// Witness for an edge decision; blocked_by names one point strictly inside
/// the diametral sphere when the edge is excluded.
struct EdgeCertificate {
  std::size_t i = 0;
  std::size_t j = 0;
  std::optional<std::size_t> blocked_by;
};

inline bool is_gabriel_edge(std::size_t i, std::size_t j, Points points,
                            EdgeCertificate* cert = nullptr) {
  if (i == j) throw Error("is_gabriel_edge: i and j must differ");
  const double dij = squared_distance(points.row(i), points.row(j));
  if (cert) *cert = {i, j, std::nullopt};
  for (std::size_t k = 0; k < points.rows; ++k) {
    if (k == i || k == j) continue;
    const double dik = squared_distance(points.row(i), points.row(k));
    const double djk = squared_distance(points.row(j), points.row(k));
    if (dik + djk < dij) {
      if (cert) cert->blocked_by = k;
      return false;
    }
  }
  return true;
}

/// Returns the first pair of coincident rows, if any.
inline std::optional<std::pair<std::size_t, std::size_t>> find_duplicate_points(Points points) {
  for (std::size_t i = 0; i < points.rows; ++i)
    for (std::size_t j = i + 1; j < points.rows; ++j)
      if (squared_distance(points.row(i), points.row(j)) == 0.0) return std::make_pair(i, j);
  return std::nullopt;
}

/// All-pairs construction over the precomputed squared-distance matrix, with
/// early exit on the first blocking point. Exact-set equivalent to the plain
/// triple loop.
inline GabrielGraph build_gabriel(Points points) {
  const std::size_t n = points.rows;
  if (n < 2) throw Error("build_gabriel needs at least 2 points, got " + std::to_string(n));
  if (const auto dup = find_duplicate_points(points))
    throw Error("duplicate points at rows " + std::to_string(dup->first) + " and " +
                std::to_string(dup->second) + " (0-based); remove duplicates first");

  std::vector<double> d2(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = squared_distance(points.row(i), points.row(j));
      d2[i * n + j] = d;
      d2[j * n + i] = d;
    }

  GabrielGraph g;
  g.n = n;
  g.neighbors.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = d2[i * n + j];
      bool edge = true;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (d2[i * n + k] + d2[j * n + k] < dij) {
          edge = false;
          break;
        }
      }
      if (edge) {
        g.edges.emplace_back(i, j);
        g.neighbors[i].push_back(j);
        g.neighbors[j].push_back(i);
      }
    }
  }
  for (auto& nb : g.neighbors) std::sort(nb.begin(), nb.end());
  return g;
}

inline std::vector<std::size_t> vertex_degrees(const GabrielGraph& g) {
  std::vector<std::size_t> deg(g.n);
  for (std::size_t i = 0; i < g.n; ++i) deg[i] = g.degree(i);
  return deg;
}

}  // namespace ggclf
