#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>

#include "gct/graph_match.hpp"

using namespace gct;

namespace {

// descriptor layout: every patch gets a distinct random unit-ish vector
Eigen::MatrixXd random_descriptors(std::mt19937_64& rng, int patches, int dim = 6) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd d(patches, dim);
  for (int r = 0; r < patches; ++r)
    for (int c = 0; c < dim; ++c) d(r, c) = u(rng);
  return d;
}

// gallery view of a probe shifted one patch column to the right
Eigen::MatrixXd shift_one_column(const Eigen::MatrixXd& probe, const PatchGrid& grid,
                                 std::mt19937_64& rng) {
  Eigen::MatrixXd gallery = random_descriptors(rng, grid.patch_count(),
                                               static_cast<int>(probe.cols()));
  for (int r = 0; r < grid.rows; ++r)
    for (int c = 0; c + 1 < grid.cols; ++c)
      gallery.row(r * grid.cols + c + 1) = probe.row(r * grid.cols + c);
  return gallery;
}

}  // namespace

TEST_CASE("identical images at small lambda learn the identity template") {
  const PatchGrid grid = decompose(GridConfig{});
  std::mt19937_64 rng(61);
  const Eigen::MatrixXd desc = random_descriptors(rng, grid.patch_count());
  TrainingPair pair{"self", "p.png", "g.png", desc, desc};
  const auto templates = learn_templates({pair}, grid, 0.1, 1);
  REQUIRE(templates.size() == 1u);
  const auto& t = templates[0];
  CHECK(t.pair_id == "self");
  REQUIRE(t.correspondences.size() == static_cast<size_t>(grid.patch_count()));
  for (const auto& c : t.correspondences) CHECK(c.probe == c.gallery);
}

TEST_CASE("large lambda removes every correspondence") {
  const PatchGrid grid = decompose(GridConfig{});
  std::mt19937_64 rng(62);
  const Eigen::MatrixXd desc = random_descriptors(rng, grid.patch_count());
  TrainingPair pair{"self", "p.png", "g.png", desc, desc};
  // max node affinity is 1 and each stripe solve sees at most 3 active
  // vertices with unit context, so 1 + 2*2 = 5 bounds every marginal gain
  const auto templates = learn_templates({pair}, grid, 6.0, 1);
  REQUIRE(templates.size() == 1u);
  CHECK(templates[0].correspondences.empty());
}

TEST_CASE("one-column shift is recovered for interior patches") {
  const PatchGrid grid = decompose(GridConfig{});
  std::mt19937_64 rng(63);
  const Eigen::MatrixXd probe = random_descriptors(rng, grid.patch_count());
  const Eigen::MatrixXd gallery = shift_one_column(probe, grid, rng);
  TrainingPair pair{"shift", "p.png", "g.png", probe, gallery};
  const auto templates = learn_templates({pair}, grid, 0.5, 1);
  REQUIRE(templates.size() == 1u);

  std::set<std::pair<int, int>> found;
  for (const auto& c : templates[0].correspondences) found.insert({c.probe, c.gallery});
  int expected = 0, hit = 0;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c + 1 < grid.cols; ++c) {
      ++expected;
      hit += found.count({r * grid.cols + c, r * grid.cols + c + 1});
    }
  }
  CHECK(expected == grid.rows * (grid.cols - 1));
  CHECK(static_cast<double>(hit) / expected >= 0.7);
}

TEST_CASE("templates are injective on both sides even with overlapping stripes") {
  const PatchGrid grid = decompose(GridConfig{});
  std::mt19937_64 rng(64);
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd probe = random_descriptors(rng, grid.patch_count());
    const Eigen::MatrixXd gallery = random_descriptors(rng, grid.patch_count());
    TrainingPair pair{"r", "p.png", "g.png", probe, gallery};
    const auto templates = learn_templates({pair}, grid, 0.3, 2);
    std::set<int> probes, galleries;
    for (const auto& c : templates[0].correspondences) {
      CHECK(probes.insert(c.probe).second);
      CHECK(galleries.insert(c.gallery).second);
      CHECK(c.stripe == grid.stripe_of(c.probe));
      CHECK(std::abs(grid.stripe_of(c.gallery) - c.stripe) <= 2);
    }
  }
}

TEST_CASE("match_graphs is deterministic") {
  const PatchGrid grid = decompose(GridConfig{});
  std::mt19937_64 rng(65);
  const Eigen::MatrixXd probe = random_descriptors(rng, grid.patch_count());
  const Eigen::MatrixXd gallery = random_descriptors(rng, grid.patch_count());
  const AttributeGraph g1 = build_graph(grid, probe);
  const AttributeGraph g2 = build_graph(grid, gallery);
  const PairMatchResult a = match_graphs(grid, g1, g2, 0.5, 1);
  const PairMatchResult b = match_graphs(grid, g1, g2, 0.5, 1);
  REQUIRE(a.correspondences.size() == b.correspondences.size());
  for (size_t i = 0; i < a.correspondences.size(); ++i) {
    CHECK(a.correspondences[i].probe == b.correspondences[i].probe);
    CHECK(a.correspondences[i].gallery == b.correspondences[i].gallery);
  }
  CHECK(a.total_score == b.total_score);
  CHECK(a.stripe_scores.size() == static_cast<size_t>(grid.rows));
}

TEST_CASE("template JSON round-trips") {
  std::vector<CorrespondenceTemplate> templates(2);
  templates[0].pair_id = "0001";
  templates[0].probe_path = "cam_a/0001_0.png";
  templates[0].gallery_path = "cam_b/0001_0.png";
  templates[0].correspondences = {{0, 1, 0}, {3, 4, 1}};
  templates[1].pair_id = "0002";
  templates[1].probe_path = "cam_a/0002_0.png";
  templates[1].gallery_path = "cam_b/0002_0.png";
  const auto tmp = std::filesystem::temp_directory_path() / "gct_templates.json";
  save_templates(tmp, templates);
  const auto back = load_templates(tmp);
  REQUIRE(back.size() == 2u);
  CHECK(back[0].pair_id == "0001");
  CHECK(back[0].probe_path == "cam_a/0001_0.png");
  REQUIRE(back[0].correspondences.size() == 2u);
  CHECK(back[0].correspondences[1].probe == 3);
  CHECK(back[0].correspondences[1].gallery == 4);
  CHECK(back[0].correspondences[1].stripe == 1);
  CHECK(back[1].correspondences.empty());
}
