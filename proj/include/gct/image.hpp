#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gct {

// Interleaved RGB image with components in [0,1], row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<float> rgb;

  Image() = default;
  Image(int w, int h) : width(w), height(h), rgb(static_cast<size_t>(w) * h * 3, 0.0f) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("Image: non-positive dimensions");
  }

  float& at(int x, int y, int c) { return rgb[(static_cast<size_t>(y) * width + x) * 3 + c]; }
  float at(int x, int y, int c) const { return rgb[(static_cast<size_t>(y) * width + x) * 3 + c]; }
  bool empty() const { return rgb.empty(); }
};

// ITU-R BT.601 luma.
std::vector<float> to_gray(const Image& img);

// h, s, v all in [0,1]; gray pixels (s == 0) get h = 0.
void rgb_to_hsv(float r, float g, float b, float& h, float& s, float& v);

Image crop(const Image& img, int x0, int y0, int w, int h);

}  // namespace gct
