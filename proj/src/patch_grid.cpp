#include "gct/patch_grid.hpp"

#include <stdexcept>
#include <string>

namespace gct {

void GridConfig::validate() const {
  if (image_width <= 0 || image_height <= 0)
    throw std::invalid_argument("GridConfig: non-positive image dimensions");
  if (patch_width <= 0 || patch_height <= 0)
    throw std::invalid_argument("GridConfig: non-positive patch dimensions");
  if (patch_width > image_width || patch_height > image_height)
    throw std::invalid_argument("GridConfig: patch " + std::to_string(patch_width) + "x" +
                                std::to_string(patch_height) + " exceeds image " +
                                std::to_string(image_width) + "x" + std::to_string(image_height));
  if (stride_x < 1 || stride_y < 1) throw std::invalid_argument("GridConfig: strides must be >= 1");
  if (search_margin < 0) throw std::invalid_argument("GridConfig: negative search margin");
}

bool GridConfig::same_geometry(const GridConfig& other) const {
  return image_width == other.image_width && image_height == other.image_height &&
         patch_width == other.patch_width && patch_height == other.patch_height &&
         stride_x == other.stride_x && stride_y == other.stride_y;
}

PatchGrid decompose(const GridConfig& config) {
  config.validate();
  PatchGrid grid;
  grid.config = config;
  grid.cols = (config.image_width - config.patch_width) / config.stride_x + 1;
  grid.rows = (config.image_height - config.patch_height) / config.stride_y + 1;
  grid.centers.reserve(static_cast<size_t>(grid.rows) * grid.cols);
  grid.stripe.reserve(grid.centers.capacity());
  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) {
      grid.centers.push_back({j * config.stride_x + config.patch_width / 2.0,
                              i * config.stride_y + config.patch_height / 2.0});
      grid.stripe.push_back(i);
    }
  }
  return grid;
}

std::vector<std::pair<int, int>> candidate_pairs(const PatchGrid& probe,
                                                 const PatchGrid& gallery,
                                                 int search_margin) {
  if (!probe.config.same_geometry(gallery.config))
    throw std::invalid_argument("candidate_pairs: probe and gallery grid geometry differ");
  if (search_margin < 0) throw std::invalid_argument("candidate_pairs: negative search margin");
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < probe.patch_count(); ++i) {
    for (int a = 0; a < gallery.patch_count(); ++a) {
      if (std::abs(probe.stripe_of(i) - gallery.stripe_of(a)) <= search_margin)
        out.emplace_back(i, a);
    }
  }
  return out;
}

}  // namespace gct
