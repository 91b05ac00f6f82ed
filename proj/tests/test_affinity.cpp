#include <doctest.h>

#include <cmath>
#include <random>

#include "gct/affinity.hpp"
#include "gct/patch_grid.hpp"

using namespace gct;

namespace {

GraphVertex make_vertex(int index, double sx, double sy, std::initializer_list<double> visual) {
  GraphVertex v;
  v.patch_index = index;
  v.spatial = Eigen::Vector2d(sx, sy);
  v.visual = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(visual.size()));
  Eigen::Index i = 0;
  for (double x : visual) v.visual[i++] = x;
  return v;
}

// Independent recomputation of the node formula with long doubles.
long double node_oracle(const GraphVertex& a, const GraphVertex& b) {
  long double sp = 0.0L, sf = 0.0L;
  for (int i = 0; i < 2; ++i) {
    const long double d = static_cast<long double>(a.spatial[i]) - b.spatial[i];
    sp += d * d;
  }
  for (Eigen::Index i = 0; i < a.visual.size(); ++i) {
    const long double d = static_cast<long double>(a.visual[i]) - b.visual[i];
    sf += d * d;
  }
  return expl(-sqrtl(sp)) * expl(-sqrtl(sf));
}

long double edge_oracle(const GraphVertex& i, const GraphVertex& j, const GraphVertex& a,
                        const GraphVertex& b) {
  long double sp = 0.0L, sf = 0.0L;
  for (int d = 0; d < 2; ++d) {
    const long double v = (static_cast<long double>(i.spatial[d]) - j.spatial[d]) -
                          (static_cast<long double>(a.spatial[d]) - b.spatial[d]);
    sp += v * v;
  }
  for (Eigen::Index d = 0; d < i.visual.size(); ++d) {
    const long double v = (static_cast<long double>(i.visual[d]) - j.visual[d]) -
                          (static_cast<long double>(a.visual[d]) - b.visual[d]);
    sf += v * v;
  }
  return expl(-sqrtl(sp)) * expl(-sqrtl(sf));
}

AttributeGraph random_graph(const PatchGrid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd desc(grid.patch_count(), 4);
  for (Eigen::Index r = 0; r < desc.rows(); ++r)
    for (Eigen::Index c = 0; c < desc.cols(); ++c) desc(r, c) = u(rng);
  return build_graph(grid, desc);
}

}  // namespace

TEST_CASE("node_affinity: identical attributes give exactly 1") {
  const auto a = make_vertex(0, 0.3, 0.4, {0.5, 0.5, 0.1});
  CHECK(node_affinity(a, a) == 1.0);
}

TEST_CASE("node_affinity: visual distance ln 2 at equal positions gives 0.5") {
  const auto a = make_vertex(0, 0.3, 0.4, {0.0});
  const auto b = make_vertex(1, 0.3, 0.4, {std::log(2.0)});
  CHECK(node_affinity(a, b) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("node_affinity matches an independent recomputation on random attributes") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto a = make_vertex(0, u(rng), u(rng), {u(rng), u(rng), u(rng)});
    const auto b = make_vertex(1, u(rng), u(rng), {u(rng), u(rng), u(rng)});
    CHECK(node_affinity(a, b) ==
          doctest::Approx(static_cast<double>(node_oracle(a, b))).epsilon(1e-12));
    CHECK(node_affinity(a, b) > 0.0);
    CHECK(node_affinity(a, b) <= 1.0);
  }
}

TEST_CASE("node_affinity rejects dimension mismatch") {
  const auto a = make_vertex(0, 0.1, 0.1, {1.0, 0.0});
  const auto b = make_vertex(1, 0.1, 0.1, {1.0});
  CHECK_THROWS_AS(node_affinity(a, b), std::invalid_argument);
}

TEST_CASE("edge_affinity: identical displacement and feature difference give 1") {
  const auto i = make_vertex(0, 0.1, 0.2, {0.3, 0.0});
  const auto j = make_vertex(1, 0.5, 0.2, {0.8, 0.1});
  // gallery edge translated by (0.2, 0.3), features shifted by 0.05
  auto a = i;
  auto b = j;
  a.spatial += Eigen::Vector2d(0.2, 0.3);
  b.spatial += Eigen::Vector2d(0.2, 0.3);
  a.visual.array() += 0.05;
  b.visual.array() += 0.05;
  CHECK(edge_affinity(i, j, a, b) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("edge_affinity: unit displacement mismatch gives exp(-1)") {
  const auto i = make_vertex(0, 0.0, 0.0, {0.0});
  const auto j = make_vertex(1, 0.5, 0.0, {0.0});
  const auto a = make_vertex(0, 0.0, 0.0, {0.0});
  const auto b = make_vertex(1, 1.5, 0.0, {0.0});
  CHECK(edge_affinity(i, j, a, b) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("edge_affinity matches an independent recomputation on random edges") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto i = make_vertex(0, u(rng), u(rng), {u(rng), u(rng)});
    const auto j = make_vertex(1, u(rng), u(rng), {u(rng), u(rng)});
    const auto a = make_vertex(2, u(rng), u(rng), {u(rng), u(rng)});
    const auto b = make_vertex(3, u(rng), u(rng), {u(rng), u(rng)});
    CHECK(edge_affinity(i, j, a, b) ==
          doctest::Approx(static_cast<double>(edge_oracle(i, j, a, b))).epsilon(1e-12));
  }
}

TEST_CASE("build_affinity: two 1-vertex graphs give the 1x1 node affinity") {
  GridConfig cfg{24, 32, 24, 32, 12, 16, 0};
  const PatchGrid grid = decompose(cfg);
  std::mt19937_64 rng(1);
  const AttributeGraph g1 = random_graph(grid, rng);
  const AttributeGraph g2 = random_graph(grid, rng);
  const AffinityMatrix k = build_affinity(g1, g2, {{0, 0}});
  CHECK(k.dim() == 1);
  CHECK(k.k(0, 0) == node_affinity(g1.vertices[0], g2.vertices[0]));
}

TEST_CASE("build_affinity: identical 2-vertex stripes give unit context for the true pairing") {
  GridConfig cfg{36, 32, 24, 32, 12, 16, 0};  // 1 row x 2 cols
  const PatchGrid grid = decompose(cfg);
  REQUIRE(grid.patch_count() == 2);
  Eigen::MatrixXd desc(2, 3);
  desc << 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  const AttributeGraph g1 = build_graph(grid, desc);
  const AttributeGraph g2 = build_graph(grid, desc);
  const auto cands = candidate_pairs(grid, grid, 0);
  const AffinityMatrix k = build_affinity(g1, g2, cands);
  const int p = k.index_of(0, 0);
  const int q = k.index_of(1, 1);
  REQUIRE(p >= 0);
  REQUIRE(q >= 0);
  CHECK(k.k(p, p) == 1.0);
  CHECK(k.k(q, q) == 1.0);
  CHECK(k.k(p, q) == 1.0);  // same displacement, same feature difference
}

TEST_CASE("build_affinity zeroes conflicting candidates and missing edges") {
  GridConfig cfg{36, 32, 24, 32, 12, 16, 0};
  const PatchGrid grid = decompose(cfg);
  std::mt19937_64 rng(5);
  const AttributeGraph g1 = random_graph(grid, rng);
  const AttributeGraph g2 = random_graph(grid, rng);
  const auto cands = candidate_pairs(grid, grid, 0);
  const AffinityMatrix k = build_affinity(g1, g2, cands);
  for (int p = 0; p < k.dim(); ++p) {
    for (int q = p + 1; q < k.dim(); ++q) {
      const auto [i, a] = k.candidates[p];
      const auto [j, b] = k.candidates[q];
      if (i == j || a == b) CHECK(k.k(p, q) == 0.0);
    }
  }
}

TEST_CASE("build_affinity matches a brute-force entrywise oracle on random graphs") {
  GridConfig cfg{48, 32, 24, 32, 12, 16, 0};  // 1 row x 3 cols
  const PatchGrid grid = decompose(cfg);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const AttributeGraph g1 = random_graph(grid, rng);
    const AttributeGraph g2 = random_graph(grid, rng);
    const auto cands = candidate_pairs(grid, grid, 0);
    const AffinityMatrix k = build_affinity(g1, g2, cands);
    for (int p = 0; p < k.dim(); ++p) {
      for (int q = 0; q < k.dim(); ++q) {
        const auto [i, a] = k.candidates[p];
        const auto [j, b] = k.candidates[q];
        double expected;
        if (p == q) {
          expected = static_cast<double>(node_oracle(g1.vertices[i], g2.vertices[a]));
        } else if (i == j || a == b || !g1.has_edge(i, j) || !g2.has_edge(a, b)) {
          expected = 0.0;
        } else {
          expected = static_cast<double>(
              edge_oracle(g1.vertices[i], g1.vertices[j], g2.vertices[a], g2.vertices[b]));
        }
        CHECK(k.k(p, q) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(k.k(p, q) == k.k(q, p));
        CHECK(k.k(p, q) >= 0.0);
        CHECK(k.k(p, q) <= 1.0);
      }
    }
  }
}

TEST_CASE("edge affinities are invariant to a common spatial translation") {
  GridConfig cfg{48, 32, 24, 32, 12, 16, 0};
  const PatchGrid grid = decompose(cfg);
  std::mt19937_64 rng(17);
  AttributeGraph g1 = random_graph(grid, rng);
  AttributeGraph g2 = random_graph(grid, rng);
  const double before = edge_affinity(g1.vertices[0], g1.vertices[1], g2.vertices[0],
                                      g2.vertices[2]);
  const Eigen::Vector2d shift(0.37, -0.12);
  for (auto* g : {&g1, &g2})
    for (auto& v : g->vertices) v.spatial += shift;
  const double after = edge_affinity(g1.vertices[0], g1.vertices[1], g2.vertices[0],
                                     g2.vertices[2]);
  CHECK(before == doctest::Approx(after).epsilon(1e-12));
}

TEST_CASE("build_affinity rejects an empty candidate set") {
  GridConfig cfg{24, 32, 24, 32, 12, 16, 0};
  const PatchGrid grid = decompose(cfg);
  std::mt19937_64 rng(2);
  const AttributeGraph g1 = random_graph(grid, rng);
  const AttributeGraph g2 = random_graph(grid, rng);
  CHECK_THROWS_AS(build_affinity(g1, g2, {}), std::invalid_argument);
}
