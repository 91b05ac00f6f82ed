#include <doctest.h>

#include <filesystem>
#include <random>

#include "gct/patch_descriptor.hpp"

using namespace gct;

namespace {

Image solid_patch(float r, float g, float b, int w = 24, int h = 32) {
  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  return img;
}

Image random_patch(std::mt19937_64& rng, int w = 24, int h = 32) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  Image img(w, h);
  for (float& v : img.rgb) v = u(rng);
  return img;
}

}  // namespace

TEST_CASE("solid patches saturate one bin per color channel with zero gradients") {
  const DescriptorConfig cfg;
  const Eigen::VectorXd d = extract_patch_descriptor(solid_patch(0.9f, 0.2f, 0.1f), cfg);
  REQUIRE(d.size() == 33);
  for (int block = 0; block < 3; ++block) {
    const auto seg = d.segment(block * 8, 8);
    CHECK(seg.maxCoeff() == 1.0);
    CHECK(seg.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(d.segment(24, 9).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("histogram blocks sum to one (gradient block may be all zero)") {
  std::mt19937_64 rng(21);
  const DescriptorConfig cfg;
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd d = extract_patch_descriptor(random_patch(rng), cfg);
    for (int block = 0; block < 3; ++block)
      CHECK(d.segment(block * 8, 8).sum() == doctest::Approx(1.0).epsilon(1e-9));
    const double gsum = d.segment(24, 9).sum();
    CHECK((gsum == 0.0 || gsum == doctest::Approx(1.0).epsilon(1e-9)));
    CHECK(d.allFinite());
  }
}

TEST_CASE("descriptor extraction is deterministic") {
  std::mt19937_64 rng(22);
  const DescriptorConfig cfg;
  const Image patch = random_patch(rng);
  const Eigen::VectorXd a = extract_patch_descriptor(patch, cfg);
  const Eigen::VectorXd b = extract_patch_descriptor(patch, cfg);
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("uniform brightness shift leaves the hue histogram unchanged") {
  std::mt19937_64 rng(23);
  const DescriptorConfig cfg;
  Image patch = random_patch(rng);
  for (float& v : patch.rgb) v *= 0.6f;  // keep room for the shift
  Image shifted = patch;
  for (float& v : shifted.rgb) v += 0.3f;
  const Eigen::VectorXd a = extract_patch_descriptor(patch, cfg);
  const Eigen::VectorXd b = extract_patch_descriptor(shifted, cfg);
  CHECK((a.segment(0, 8) - b.segment(0, 8)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("wrong patch size is rejected") {
  const DescriptorConfig cfg;
  CHECK_THROWS_AS(extract_patch_descriptor(solid_patch(0.5f, 0.5f, 0.5f, 20, 32), cfg),
                  std::invalid_argument);
}

TEST_CASE("image_descriptors covers every grid patch") {
  GridConfig gcfg;
  const PatchGrid grid = decompose(gcfg);
  std::mt19937_64 rng(24);
  const Image img = random_patch(rng, gcfg.image_width, gcfg.image_height);
  const DescriptorConfig cfg;
  const Eigen::MatrixXd d = image_descriptors(img, grid, cfg);
  CHECK(d.rows() == grid.patch_count());
  CHECK(d.cols() == cfg.dimension());
  Image wrong(gcfg.image_width, gcfg.image_height + 2);
  CHECK_THROWS_AS(image_descriptors(wrong, grid, cfg), std::invalid_argument);
}

TEST_CASE("descriptor cache round-trips at float precision") {
  std::mt19937_64 rng(25);
  Eigen::MatrixXd d(7, 33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Eigen::Index r = 0; r < d.rows(); ++r)
    for (Eigen::Index c = 0; c < d.cols(); ++c) d(r, c) = u(rng);
  const auto tmp = std::filesystem::temp_directory_path() / "gct_desc_cache.bin";
  save_descriptor_cache(tmp, d);
  const Eigen::MatrixXd back = load_descriptor_cache(tmp);
  REQUIRE(back.rows() == d.rows());
  REQUIRE(back.cols() == d.cols());
  CHECK((back - d).cwiseAbs().maxCoeff() < 1e-6);  // float32 storage
}

TEST_CASE("cache keys separate paths and configs") {
  GridConfig grid;
  DescriptorConfig cfg;
  const auto a = descriptor_cache_key("cam_a/0001_0.png", grid, cfg);
  const auto b = descriptor_cache_key("cam_a/0002_0.png", grid, cfg);
  CHECK(a != b);
  GridConfig other = grid;
  other.stride_x = 6;
  CHECK(descriptor_cache_key("cam_a/0001_0.png", other, cfg) != a);
  CHECK(descriptor_cache_key("cam_a/0001_0.png", grid, cfg) == a);
}
