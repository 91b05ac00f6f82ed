#include "gct/hog.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gct {

void HogConfig::validate() const {
  if (image_width <= 0 || image_height <= 0)
    throw std::invalid_argument("HogConfig: non-positive image dimensions");
  if (bins < 2) throw std::invalid_argument("HogConfig: bins must be >= 2");
  if (block_cells < 1 || block_stride_cells < 1)
    throw std::invalid_argument("HogConfig: bad block geometry");
  if (cell_sizes.empty()) throw std::invalid_argument("HogConfig: no cell sizes");
  for (int cs : cell_sizes) {
    if (cs <= 0 || image_width % cs != 0 || image_height % cs != 0)
      throw std::invalid_argument("HogConfig: cell size " + std::to_string(cs) +
                                  " does not divide image " + std::to_string(image_width) + "x" +
                                  std::to_string(image_height));
    if (image_width / cs < block_cells || image_height / cs < block_cells)
      throw std::invalid_argument("HogConfig: cell size " + std::to_string(cs) +
                                  " leaves fewer cells than one block");
  }
}

int HogConfig::dimension() const {
  validate();
  int total = 0;
  for (int cs : cell_sizes) {
    const int cx = image_width / cs;
    const int cy = image_height / cs;
    const int bx = (cx - block_cells) / block_stride_cells + 1;
    const int by = (cy - block_cells) / block_stride_cells + 1;
    total += bx * by * block_cells * block_cells * bins;
  }
  return total;
}

Eigen::VectorXd extract_hog(const std::vector<float>& gray, int width, int height,
                            const HogConfig& config) {
  config.validate();
  if (width != config.image_width || height != config.image_height ||
      gray.size() != static_cast<size_t>(width) * height)
    throw std::invalid_argument("extract_hog: image is not at the configured canonical size");

  // central-difference gradients with replicated borders
  const auto px = [&](int x, int y) {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return static_cast<double>(gray[static_cast<size_t>(y) * width + x]);
  };
  std::vector<double> mag(static_cast<size_t>(width) * height);
  std::vector<int> bin(static_cast<size_t>(width) * height);
  const double pi = std::numbers::pi;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double gx = px(x + 1, y) - px(x - 1, y);
      const double gy = px(x, y + 1) - px(x, y - 1);
      const double m = std::sqrt(gx * gx + gy * gy);
      double theta = std::atan2(gy, gx);  // (-pi, pi]
      if (theta < 0) theta += pi;         // unsigned, [0, pi)
      if (theta >= pi) theta -= pi;
      int b = static_cast<int>(theta / pi * config.bins);
      if (b >= config.bins) b = config.bins - 1;
      mag[static_cast<size_t>(y) * width + x] = m;
      bin[static_cast<size_t>(y) * width + x] = b;
    }
  }

  Eigen::VectorXd feature(config.dimension());
  Eigen::Index at = 0;
  const double eps = 1e-6;
  for (int cs : config.cell_sizes) {
    const int cx = width / cs;
    const int cy = height / cs;
    // per-cell magnitude-weighted histograms
    Eigen::MatrixXd cells = Eigen::MatrixXd::Zero(cy * cx, config.bins);
    for (int y = 0; y < height; ++y) {
      const int ci = y / cs;
      for (int x = 0; x < width; ++x) {
        const int cj = x / cs;
        const size_t p = static_cast<size_t>(y) * width + x;
        cells(ci * cx + cj, bin[p]) += mag[p];
      }
    }
    const int bx = (cx - config.block_cells) / config.block_stride_cells + 1;
    const int by = (cy - config.block_cells) / config.block_stride_cells + 1;
    for (int bi = 0; bi < by; ++bi) {
      for (int bj = 0; bj < bx; ++bj) {
        const Eigen::Index start = at;
        for (int u = 0; u < config.block_cells; ++u) {
          for (int v = 0; v < config.block_cells; ++v) {
            const int ci = bi * config.block_stride_cells + u;
            const int cj = bj * config.block_stride_cells + v;
            feature.segment(at, config.bins) = cells.row(ci * cx + cj);
            at += config.bins;
          }
        }
        auto block = feature.segment(start, at - start);
        block /= std::sqrt(block.squaredNorm() + eps * eps);
      }
    }
  }
  return feature;
}

Eigen::VectorXd extract_hog(const Image& image, const HogConfig& config) {
  return extract_hog(to_gray(image), image.width, image.height, config);
}

}  // namespace gct
