#include <doctest.h>

#include <random>
#include <set>

#include "gct/attribute_graph.hpp"
#include "gct/patch_grid.hpp"

using namespace gct;

TEST_CASE("decompose: 128x48 canonical grid is 7 rows x 3 cols") {
  GridConfig cfg;  // defaults: 48x128 image, 24x32 patch, stride 12x16
  const PatchGrid grid = decompose(cfg);
  CHECK(grid.rows == 7);
  CHECK(grid.cols == 3);
  CHECK(grid.patch_count() == 21);
  // explicit stride 16x12 spelling from the same geometry
  GridConfig explicit_cfg{48, 128, 24, 32, 12, 16, 1};
  const PatchGrid grid2 = decompose(explicit_cfg);
  CHECK(grid2.rows == 7);
  CHECK(grid2.cols == 3);
}

TEST_CASE("decompose: image equal to patch gives a single patch and stripe") {
  GridConfig cfg{24, 32, 24, 32, 12, 16, 1};
  const PatchGrid grid = decompose(cfg);
  CHECK(grid.patch_count() == 1);
  CHECK(grid.rows == 1);
  CHECK(grid.stripe_of(0) == 0);
  CHECK(grid.centers[0][0] == doctest::Approx(12.0));
  CHECK(grid.centers[0][1] == doctest::Approx(16.0));
}

TEST_CASE("decompose: 64x48 image with default strides gives 3x3") {
  GridConfig cfg{48, 64, 24, 32, 12, 16, 1};
  const PatchGrid grid = decompose(cfg);
  CHECK(grid.rows == 3);
  CHECK(grid.cols == 3);
}

TEST_CASE("decompose rejects patches larger than the image") {
  GridConfig cfg{20, 64, 24, 32, 12, 16, 1};
  CHECK_THROWS_AS(decompose(cfg), std::invalid_argument);
}

TEST_CASE("decompose is deterministic with row-major centers inside bounds") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    GridConfig cfg;
    cfg.patch_width = 4 + static_cast<int>(rng() % 12);
    cfg.patch_height = 4 + static_cast<int>(rng() % 12);
    cfg.image_width = cfg.patch_width + static_cast<int>(rng() % 40);
    cfg.image_height = cfg.patch_height + static_cast<int>(rng() % 40);
    cfg.stride_x = 1 + static_cast<int>(rng() % cfg.patch_width);
    cfg.stride_y = 1 + static_cast<int>(rng() % cfg.patch_height);
    const PatchGrid grid = decompose(cfg);
    REQUIRE(grid.patch_count() == grid.rows * grid.cols);
    for (int p = 0; p < grid.patch_count(); ++p) {
      CHECK(grid.centers[p][0] >= 0);
      CHECK(grid.centers[p][0] <= cfg.image_width);
      CHECK(grid.centers[p][1] >= 0);
      CHECK(grid.centers[p][1] <= cfg.image_height);
      if (p > 0) {
        // row-major ordering
        const bool later = grid.centers[p][1] > grid.centers[p - 1][1] ||
                           (grid.centers[p][1] == grid.centers[p - 1][1] &&
                            grid.centers[p][0] > grid.centers[p - 1][0]);
        CHECK(later);
      }
    }
    const PatchGrid again = decompose(cfg);
    CHECK(again.centers == grid.centers);
  }
}

TEST_CASE("candidate_pairs: margin 0 on the 7x3 grid gives 3 gallery patches each") {
  const PatchGrid grid = decompose(GridConfig{});
  const auto pairs = candidate_pairs(grid, grid, 0);
  CHECK(pairs.size() == 21u * 3u);
  for (const auto& [i, a] : pairs) CHECK(grid.stripe_of(i) == grid.stripe_of(a));
}

TEST_CASE("candidate_pairs: margin >= rows-1 gives the full product") {
  const PatchGrid grid = decompose(GridConfig{});
  const auto pairs = candidate_pairs(grid, grid, grid.rows - 1);
  CHECK(pairs.size() == 21u * 21u);
}

TEST_CASE("candidate_pairs: top-row probe patch with margin 1 sees rows 0-1") {
  const PatchGrid grid = decompose(GridConfig{});
  const auto pairs = candidate_pairs(grid, grid, 1);
  int count = 0;
  for (const auto& [i, a] : pairs)
    if (i == 0) ++count;
  CHECK(count == 6);
  CHECK(std::is_sorted(pairs.begin(), pairs.end()));
}

TEST_CASE("candidate_pairs rejects mismatched geometry") {
  const PatchGrid g1 = decompose(GridConfig{});
  GridConfig other;
  other.image_height = 96;
  const PatchGrid g2 = decompose(other);
  CHECK_THROWS_AS(candidate_pairs(g1, g2, 1), std::invalid_argument);
}

TEST_CASE("build_graph: single-patch grid has one vertex and no edges") {
  GridConfig cfg{24, 32, 24, 32, 12, 16, 1};
  const PatchGrid grid = decompose(cfg);
  const AttributeGraph g = build_graph(grid, Eigen::MatrixXd::Random(1, 5));
  CHECK(g.vertex_count() == 1);
  CHECK(g.edges.empty());
}

TEST_CASE("build_graph: a 3-patch stripe is fully connected") {
  GridConfig cfg{48, 32, 24, 32, 12, 16, 1};  // one row of 3 patches
  const PatchGrid grid = decompose(cfg);
  REQUIRE(grid.rows == 1);
  REQUIRE(grid.cols == 3);
  const AttributeGraph g = build_graph(grid, Eigen::MatrixXd::Random(3, 5));
  CHECK(g.edges.size() == 3u);  // C(3,2)
}

TEST_CASE("build_graph: zero descriptors stay zero, others are unit norm") {
  const PatchGrid grid = decompose(GridConfig{});
  Eigen::MatrixXd desc = Eigen::MatrixXd::Random(grid.patch_count(), 6).cwiseAbs();
  desc.row(4).setZero();
  const AttributeGraph g = build_graph(grid, desc);
  CHECK(g.vertices[4].visual.norm() == 0.0);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (v == 4) continue;
    CHECK(g.vertices[v].visual.norm() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(g.vertices[v].spatial[0] >= 0.0);
    CHECK(g.vertices[v].spatial[0] <= 1.0);
    CHECK(g.vertices[v].spatial[1] >= 0.0);
    CHECK(g.vertices[v].spatial[1] <= 1.0);
  }
}

TEST_CASE("build_graph rejects descriptor count mismatch") {
  const PatchGrid grid = decompose(GridConfig{});
  CHECK_THROWS_AS(build_graph(grid, Eigen::MatrixXd::Random(5, 6)), std::invalid_argument);
}

TEST_CASE("graph edges always connect vertices of the same stripe") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    GridConfig cfg;
    cfg.patch_width = 6 + static_cast<int>(rng() % 10);
    cfg.patch_height = 6 + static_cast<int>(rng() % 10);
    cfg.image_width = cfg.patch_width * (1 + static_cast<int>(rng() % 3));
    cfg.image_height = cfg.patch_height * (1 + static_cast<int>(rng() % 3));
    cfg.stride_x = std::max(1, cfg.patch_width / 2);
    cfg.stride_y = std::max(1, cfg.patch_height / 2);
    const PatchGrid grid = decompose(cfg);
    const AttributeGraph g = build_graph(grid, Eigen::MatrixXd::Random(grid.patch_count(), 4));
    for (const auto& [i, j] : g.edges) CHECK(grid.stripe_of(i) == grid.stripe_of(j));
  }
}

TEST_CASE("build_graph twice on the same inputs gives identical graphs") {
  const PatchGrid grid = decompose(GridConfig{});
  const Eigen::MatrixXd desc = Eigen::MatrixXd::Random(grid.patch_count(), 8);
  const AttributeGraph a = build_graph(grid, desc);
  const AttributeGraph b = build_graph(grid, desc);
  REQUIRE(a.vertex_count() == b.vertex_count());
  for (int v = 0; v < a.vertex_count(); ++v) {
    CHECK((a.vertices[v].visual - b.vertices[v].visual).norm() == 0.0);
    CHECK((a.vertices[v].spatial - b.vertices[v].spatial).norm() == 0.0);
  }
  // renormalizing already-normalized attributes is idempotent to rounding
  Eigen::MatrixXd normalized(a.vertex_count(), desc.cols());
  for (int v = 0; v < a.vertex_count(); ++v) normalized.row(v) = a.vertices[v].visual;
  const AttributeGraph c = build_graph(grid, normalized);
  for (int v = 0; v < a.vertex_count(); ++v)
    CHECK((a.vertices[v].visual - c.vertices[v].visual).norm() < 1e-12);
}
