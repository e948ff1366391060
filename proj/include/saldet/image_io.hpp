#pragma once

#include <filesystem>

#include "saldet/image.hpp"

namespace saldet {

/// Decodes a PNG or JPEG file into 8-bit RGB. Grayscale sources are
/// replicated across channels.
ColorImage load_image(const std::filesystem::path& path);

/// Loads a raster file and binarizes it: grayscale value >= 128 maps to 1.
GtMask load_mask(const std::filesystem::path& path);

/// Writes a 1-channel PNG with values {0, 255}.
void save_mask_png(const GtMask& mask, const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG (row-major values).
void save_gray_png(int width, int height, const std::vector<std::uint8_t>& values,
                   const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG.
void save_color_png(const ColorImage& img, const std::filesystem::path& path);

}  // namespace saldet
