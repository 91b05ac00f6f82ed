#pragma once

#include <Eigen/Core>
#include <vector>

#include "gct/image.hpp"

namespace gct {

// Multi-level HoG used for body-orientation classification. Unsigned
// gradients, per-cell orientation histograms, 2x2-cell blocks with one-cell
// stride, L2 block normalization. Orientation images are resized to their
// own canonical size, which every cell size must divide.
struct HogConfig {
  int image_width = 64;
  int image_height = 128;
  std::vector<int> cell_sizes = {8, 16, 32};
  int block_cells = 2;
  int block_stride_cells = 1;
  int bins = 9;

  void validate() const;
  int dimension() const;  // total feature length across levels
};

// gray is row-major image_height x image_width, values in [0,1].
Eigen::VectorXd extract_hog(const std::vector<float>& gray, int width, int height,
                            const HogConfig& config);
Eigen::VectorXd extract_hog(const Image& image, const HogConfig& config);

}  // namespace gct
