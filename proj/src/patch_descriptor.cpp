#include "gct/patch_descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "gct/rng.hpp"

namespace gct {

Eigen::VectorXd extract_patch_descriptor(const Image& patch, const DescriptorConfig& config) {
  if (patch.width != config.patch_width || patch.height != config.patch_height)
    throw std::invalid_argument("extract_patch_descriptor: patch " + std::to_string(patch.width) +
                                "x" + std::to_string(patch.height) + " != configured " +
                                std::to_string(config.patch_width) + "x" +
                                std::to_string(config.patch_height));
  const int cb = config.color_bins;
  const int gb = config.gradient_bins;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(config.dimension());

  auto color_bin = [cb](float v) {
    int b = static_cast<int>(v * cb);
    return std::clamp(b, 0, cb - 1);
  };
  const int pixels = patch.width * patch.height;
  for (int y = 0; y < patch.height; ++y) {
    for (int x = 0; x < patch.width; ++x) {
      float h, s, v;
      rgb_to_hsv(patch.at(x, y, 0), patch.at(x, y, 1), patch.at(x, y, 2), h, s, v);
      d[color_bin(h)] += 1.0;
      d[cb + color_bin(s)] += 1.0;
      d[2 * cb + color_bin(v)] += 1.0;
    }
  }
  d.segment(0, 3 * cb) /= static_cast<double>(pixels);

  const std::vector<float> gray = to_gray(patch);
  const auto px = [&](int x, int y) {
    x = std::clamp(x, 0, patch.width - 1);
    y = std::clamp(y, 0, patch.height - 1);
    return static_cast<double>(gray[static_cast<size_t>(y) * patch.width + x]);
  };
  const double pi = std::numbers::pi;
  double total = 0.0;
  for (int y = 0; y < patch.height; ++y) {
    for (int x = 0; x < patch.width; ++x) {
      const double gx = px(x + 1, y) - px(x - 1, y);
      const double gy = px(x, y + 1) - px(x, y - 1);
      const double m = std::sqrt(gx * gx + gy * gy);
      if (m <= 0.0) continue;
      double theta = std::atan2(gy, gx);
      if (theta < 0) theta += pi;
      if (theta >= pi) theta -= pi;
      int b = static_cast<int>(theta / pi * gb);
      if (b >= gb) b = gb - 1;
      d[3 * cb + b] += m;
      total += m;
    }
  }
  if (total > 0.0) d.segment(3 * cb, gb) /= total;
  return d;
}

Eigen::MatrixXd image_descriptors(const Image& canonical, const PatchGrid& grid,
                                  const DescriptorConfig& config) {
  if (canonical.width != grid.config.image_width || canonical.height != grid.config.image_height)
    throw std::invalid_argument("image_descriptors: image is not at the grid's canonical size");
  if (grid.config.patch_width != config.patch_width ||
      grid.config.patch_height != config.patch_height)
    throw std::invalid_argument("image_descriptors: grid and descriptor patch sizes differ");
  Eigen::MatrixXd out(grid.patch_count(), config.dimension());
  for (int p = 0; p < grid.patch_count(); ++p) {
    const auto [x0, y0] = grid.patch_origin(p);
    out.row(p) = extract_patch_descriptor(
        crop(canonical, x0, y0, config.patch_width, config.patch_height), config);
  }
  return out;
}

void save_descriptor_cache(const std::filesystem::path& file, const Eigen::MatrixXd& descriptors) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("save_descriptor_cache: cannot write " + file.string());
  const std::uint32_t rows = static_cast<std::uint32_t>(descriptors.rows());
  const std::uint32_t cols = static_cast<std::uint32_t>(descriptors.cols());
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(&cols), 4);
  for (Eigen::Index r = 0; r < descriptors.rows(); ++r) {
    for (Eigen::Index c = 0; c < descriptors.cols(); ++c) {
      const float v = static_cast<float>(descriptors(r, c));
      out.write(reinterpret_cast<const char*>(&v), 4);
    }
  }
}

Eigen::MatrixXd load_descriptor_cache(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("load_descriptor_cache: cannot read " + file.string());
  std::uint32_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), 4);
  in.read(reinterpret_cast<char*>(&cols), 4);
  Eigen::MatrixXd out(rows, cols);
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      float v = 0.0f;
      in.read(reinterpret_cast<char*>(&v), 4);
      out(r, c) = v;
    }
  }
  if (!in) throw std::runtime_error("load_descriptor_cache: truncated file " + file.string());
  return out;
}

std::string descriptor_cache_key(std::string_view image_path, const GridConfig& grid,
                                 const DescriptorConfig& config) {
  std::string material(image_path);
  for (int v : {grid.image_width, grid.image_height, grid.patch_width, grid.patch_height,
                grid.stride_x, grid.stride_y, config.color_bins, config.gradient_bins}) {
    material += ':';
    material += std::to_string(v);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(material)));
  return std::string(buf);
}

}  // namespace gct
