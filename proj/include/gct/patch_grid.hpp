#pragma once

#include <array>
#include <utility>
#include <vector>

namespace gct {

// Geometry of the overlapping patch grid on a canonically resized image.
// All images are resized to (image_width, image_height) before decomposition
// so spatial attributes are comparable across sources.
struct GridConfig {
  int image_width = 48;
  int image_height = 128;
  int patch_width = 24;
  int patch_height = 32;
  int stride_x = 12;  // half patch width
  int stride_y = 16;  // half patch height
  int search_margin = 1;  // stripe rows a candidate may deviate

  void validate() const;  // throws std::invalid_argument on bad geometry
  bool same_geometry(const GridConfig& other) const;
};

struct PatchGrid {
  GridConfig config;
  std::vector<std::array<double, 2>> centers;  // (x, y) pixel coords, row-major
  std::vector<int> stripe;                     // patch index -> stripe (= patch row)
  int rows = 0;
  int cols = 0;

  int patch_count() const { return static_cast<int>(centers.size()); }
  int stripe_of(int patch_index) const { return stripe[patch_index]; }
  // Top-left pixel of a patch.
  std::array<int, 2> patch_origin(int patch_index) const {
    return {(patch_index % cols) * config.stride_x, (patch_index / cols) * config.stride_y};
  }
};

// Pure and deterministic; centers row-major at
// (j*stride_x + patch_width/2, i*stride_y + patch_height/2).
PatchGrid decompose(const GridConfig& config);

// Candidate correspondences (i, a): probe patch i may match gallery patch a
// iff |stripe(i) - stripe(a)| <= search_margin. Lexicographic order.
std::vector<std::pair<int, int>> candidate_pairs(const PatchGrid& probe,
                                                 const PatchGrid& gallery,
                                                 int search_margin);

}  // namespace gct
