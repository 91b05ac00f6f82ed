#pragma once

#include <filesystem>

#include "gct/image.hpp"

namespace gct {

Image load_image(const std::filesystem::path& file);
void save_image(const std::filesystem::path& file, const Image& image);

// Bilinear resize; returns the input unchanged when already at size.
Image resize(const Image& image, int width, int height);

}  // namespace gct
