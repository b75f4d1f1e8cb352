#include <catch_amalgamated.hpp>

#include <queue>

#include "ggclf/gabriel_graph.hpp"
#include "test_util.hpp"

using namespace ggclf;

namespace {

// hand-worked five-point planar fixture
const std::vector<double> kFivePoints = {
    0.0, 0.0,   // 0
    0.5, 1.0,   // 1
    2.0, 0.3,   // 2
    1.5, 1.3,   // 3
    1.2, -0.3,  // 4
};

Points five() { return {kFivePoints.data(), 5, 2}; }

}  // namespace

TEST_CASE("five-point fixture yields the hand-checked edge set") {
  const GabrielGraph g = build_gabriel(five());
  const tu::EdgeSet expected{{0, 1}, {0, 4}, {1, 3}, {1, 4}, {2, 3}, {2, 4}};
  CHECK(tu::edge_set(g) == expected);
  const std::vector<std::size_t> degrees{2, 3, 2, 2, 3};
  CHECK(vertex_degrees(g) == degrees);
}

TEST_CASE("is_gabriel_edge reports the blocking witness") {
  EdgeCertificate cert;
  SECTION("open pair") {
    CHECK(is_gabriel_edge(1, 4, five(), &cert));
    CHECK_FALSE(cert.blocked_by.has_value());
  }
  SECTION("blocked pair") {
    REQUIRE_FALSE(is_gabriel_edge(0, 2, five(), &cert));
    REQUIRE(cert.blocked_by.has_value());
    const std::size_t k = *cert.blocked_by;
    // the witness must actually lie strictly inside the diameter sphere
    const double dij = squared_distance(five().row(0), five().row(2));
    CHECK(squared_distance(five().row(0), five().row(k)) +
              squared_distance(five().row(2), five().row(k)) <
          dij);
  }
  SECTION("i == j rejected") { CHECK_THROWS_AS(is_gabriel_edge(2, 2, five()), Error); }
}

TEST_CASE("a point on the diameter sphere does not block") {
  // k = (1,1) sits exactly on the sphere through (0,0)-(2,0); the interior is open
  const std::vector<double> pts = {0.0, 0.0, 2.0, 0.0, 1.0, 1.0};
  const GabrielGraph g = build_gabriel({pts.data(), 3, 2});
  CHECK(g.adjacent(0, 1));

  // moving k inside removes the edge
  const std::vector<double> pts2 = {0.0, 0.0, 2.0, 0.0, 1.0, 0.5};
  const GabrielGraph g2 = build_gabriel({pts2.data(), 3, 2});
  CHECK_FALSE(g2.adjacent(0, 1));
  CHECK(g2.adjacent(0, 2));
  CHECK(g2.adjacent(1, 2));
}

TEST_CASE("collinear points form a path in sorted order") {
  const std::vector<double> pts = {3.0, 0.0, 1.0, 7.0};  // 1-d points, unsorted
  const GabrielGraph g = build_gabriel({pts.data(), 4, 1});
  const tu::EdgeSet expected{{0, 3}, {0, 2}, {1, 2}};  // 0 -> 1 -> 3 -> 7 by value
  CHECK(tu::edge_set(g) == expected);
}

TEST_CASE("duplicate points are rejected with both row indices") {
  const std::vector<double> pts = {0.0, 0.0, 1.0, 1.0, 0.0, 0.0};
  REQUIRE_THROWS_WITH(build_gabriel({pts.data(), 3, 2}),
                      Catch::Matchers::ContainsSubstring("0") &&
                          Catch::Matchers::ContainsSubstring("2") &&
                          Catch::Matchers::ContainsSubstring("duplicate"));
  CHECK(find_duplicate_points({pts.data(), 3, 2}).has_value());
  const std::vector<double> ok = {0.0, 0.0, 1.0, 1.0};
  CHECK_FALSE(find_duplicate_points({ok.data(), 2, 2}).has_value());
}

TEST_CASE("fewer than two points is an error") {
  const std::vector<double> pts = {0.0, 0.0};
  CHECK_THROWS_AS(build_gabriel({pts.data(), 1, 2}), Error);
}

TEST_CASE("construction matches the naive sphere rule on random instances") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 4 + seed % 29;
    const std::size_t d = 1 + seed % 5;
    const Dataset ds = tu::make_uniform(n, d, seed * 7 + 1);
    const GabrielGraph g = build_gabriel(ds.points());
    INFO("seed " << seed << " n " << n << " d " << d);
    CHECK(tu::edge_set(g) == tu::naive_gabriel_edges(ds.values, n, d));
  }
}

TEST_CASE("every vertex keeps an edge to its nearest neighbor") {
  const Dataset ds = tu::make_uniform(40, 3, 5);
  const GabrielGraph g = build_gabriel(ds.points());
  for (std::size_t i = 0; i < ds.rows; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = i;
    for (std::size_t j = 0; j < ds.rows; ++j) {
      if (j == i) continue;
      const double d2 = squared_distance(ds.row(i), ds.row(j));
      if (d2 < best) {
        best = d2;
        arg = j;
      }
    }
    CHECK(g.adjacent(i, arg));
  }
}

TEST_CASE("the graph is connected") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Dataset ds = tu::make_uniform(50, 2, seed);
    const GabrielGraph g = build_gabriel(ds.points());
    std::vector<bool> seen(g.n, false);
    std::queue<std::size_t> bfs;
    bfs.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!bfs.empty()) {
      const std::size_t v = bfs.front();
      bfs.pop();
      for (std::size_t w : g.neighbors[v]) {
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          bfs.push(w);
        }
      }
    }
    CHECK(reached == g.n);
  }
}

TEST_CASE("edge set is invariant under rigid motions") {
  const Dataset ds = tu::make_uniform(36, 2, 17);
  const GabrielGraph before = build_gabriel(ds.points());

  const double c = std::cos(0.7), s = std::sin(0.7);
  Dataset moved = ds;
  for (std::size_t i = 0; i < ds.rows; ++i) {
    const double x = ds.row(i)[0], y = ds.row(i)[1];
    moved.values[i * 2] = c * x - s * y + 100.0;
    moved.values[i * 2 + 1] = s * x + c * y - 3.0;
  }
  const GabrielGraph after = build_gabriel(moved.points());
  CHECK(tu::edge_set(before) == tu::edge_set(after));
}

TEST_CASE("adjacency is symmetric and irreflexive") {
  const Dataset ds = tu::make_uniform(30, 4, 9);
  const GabrielGraph g = build_gabriel(ds.points());
  for (std::size_t i = 0; i < g.n; ++i) {
    CHECK_FALSE(g.adjacent(i, i));
    for (std::size_t j : g.neighbors[i]) CHECK(g.adjacent(j, i));
  }
  // edges listed once with i < j
  for (const auto& [i, j] : g.edges) CHECK(i < j);
}
