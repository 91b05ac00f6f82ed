#include <doctest.h>

#include <random>

#include "gct/hog.hpp"

using namespace gct;

namespace {

HogConfig square64() {
  HogConfig cfg;
  cfg.image_width = 64;
  cfg.image_height = 64;
  cfg.cell_sizes = {8};
  return cfg;
}

}  // namespace

TEST_CASE("uniform image yields the all-zero feature vector") {
  const HogConfig cfg;  // 64x128, cells 8/16/32
  std::vector<float> gray(64 * 128, 0.42f);
  const Eigen::VectorXd f = extract_hog(gray, 64, 128, cfg);
  CHECK(f.size() == cfg.dimension());
  CHECK(f.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("64x64 single-level dimensionality is 7*7*4*9 = 1764") {
  const HogConfig cfg = square64();
  CHECK(cfg.dimension() == 1764);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> gray(64 * 64);
  for (float& g : gray) g = u(rng);
  CHECK(extract_hog(gray, 64, 64, cfg).size() == 1764);
}

TEST_CASE("default config dimension covers all three levels") {
  const HogConfig cfg;
  // cells 8: 15*7 blocks, cells 16: 7*3, cells 32: 3*1; 36 dims per block
  CHECK(cfg.dimension() == (15 * 7 + 7 * 3 + 3 * 1) * 36);
}

TEST_CASE("extraction is deterministic") {
  const HogConfig cfg = square64();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> gray(64 * 64);
  for (float& g : gray) g = u(rng);
  const Eigen::VectorXd a = extract_hog(gray, 64, 64, cfg);
  const Eigen::VectorXd b = extract_hog(gray, 64, 64, cfg);
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("a horizontal step edge votes into the vertical-gradient bin") {
  const HogConfig cfg = square64();
  std::vector<float> gray(64 * 64, 0.0f);
  for (int y = 32; y < 64; ++y)
    for (int x = 0; x < 64; ++x) gray[y * 64 + x] = 1.0f;
  const Eigen::VectorXd f = extract_hog(gray, 64, 64, cfg);
  // gradient direction is +y: theta = pi/2 -> bin 4 of 9
  double bin4 = 0.0, rest = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    if (i % 9 == 4)
      bin4 += f[i];
    else
      rest += f[i];
  }
  CHECK(bin4 > 0.0);
  CHECK(rest == 0.0);
}

TEST_CASE("size mismatch and bad configs are rejected") {
  const HogConfig cfg = square64();
  std::vector<float> gray(32 * 64, 0.0f);
  CHECK_THROWS_AS(extract_hog(gray, 32, 64, cfg), std::invalid_argument);
  HogConfig bad = cfg;
  bad.cell_sizes = {7};  // does not divide 64
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  HogConfig bad_bins = cfg;
  bad_bins.bins = 1;
  CHECK_THROWS_AS(bad_bins.validate(), std::invalid_argument);
}
