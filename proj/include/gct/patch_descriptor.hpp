#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <string_view>

#include "gct/image.hpp"
#include "gct/patch_grid.hpp"

namespace gct {

// Per-patch visual descriptor: 8-bin marginal HSV histograms (24 dims)
// concatenated with a 9-bin unsigned gradient-orientation histogram.
// Each histogram block sums to 1; the gradient block is all-zero for
// gradient-free patches.
struct DescriptorConfig {
  int patch_width = 24;
  int patch_height = 32;
  int color_bins = 8;
  int gradient_bins = 9;

  int dimension() const { return 3 * color_bins + gradient_bins; }
};

Eigen::VectorXd extract_patch_descriptor(const Image& patch, const DescriptorConfig& config);

// Descriptors of every grid patch, one row per patch in grid order. The
// image must already be at the grid's canonical size.
Eigen::MatrixXd image_descriptors(const Image& canonical, const PatchGrid& grid,
                                  const DescriptorConfig& config);

// Binary sidecar cache: u32 row count, u32 column count, then row-major
// little-endian float32.
void save_descriptor_cache(const std::filesystem::path& file, const Eigen::MatrixXd& descriptors);
Eigen::MatrixXd load_descriptor_cache(const std::filesystem::path& file);

// Stable cache key from the image path and the configs that shape descriptors.
std::string descriptor_cache_key(std::string_view image_path, const GridConfig& grid,
                                 const DescriptorConfig& config);

}  // namespace gct
