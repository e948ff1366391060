#pragma once

#include <cstdint>
#include <vector>

#include "saldet/error.hpp"

namespace saldet {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Dense 8-bit-per-channel color raster, row-major, (x, y) with y growing
/// downward.
class ColorImage {
 public:
  ColorImage(int width, int height)
      : width_(width), height_(height) {
    if (width < 1 || height < 1) throw DataError("image dimensions must be at least 1x1");
    pixels_.resize(static_cast<std::size_t>(width) * height);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  const Rgb& at(int x, int y) const { return pixels_[index(x, y)]; }
  Rgb& at(int x, int y) { return pixels_[index(x, y)]; }

  const std::vector<Rgb>& pixels() const noexcept { return pixels_; }
  std::vector<Rgb>& pixels() noexcept { return pixels_; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

 private:
  std::size_t index(int x, int y) const {
    if (!contains(x, y)) throw DataError("pixel coordinate out of range");
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

/// Real-valued intensity raster in [0, 255], row-major.
class GrayImage {
 public:
  GrayImage(int width, int height)
      : width_(width), height_(height) {
    if (width < 1 || height < 1) throw DataError("image dimensions must be at least 1x1");
    intensities_.resize(static_cast<std::size_t>(width) * height, 0.0);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  double at(int x, int y) const { return intensities_[index(x, y)]; }
  double& at(int x, int y) { return intensities_[index(x, y)]; }

  const std::vector<double>& intensities() const noexcept { return intensities_; }
  std::vector<double>& intensities() noexcept { return intensities_; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

 private:
  std::size_t index(int x, int y) const {
    if (!contains(x, y)) throw DataError("pixel coordinate out of range");
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_;
  int height_;
  std::vector<double> intensities_;
};

/// Strictly binary mask, row-major, values in {0, 1} (1 = salient).
class GtMask {
 public:
  GtMask(int width, int height)
      : width_(width), height_(height) {
    if (width < 1 || height < 1) throw DataError("mask dimensions must be at least 1x1");
    values_.resize(static_cast<std::size_t>(width) * height, 0);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  std::uint8_t at(int x, int y) const { return values_[index(x, y)]; }
  void set(int x, int y, std::uint8_t v) {
    values_[index(x, y)] = v ? 1 : 0;
  }

  const std::vector<std::uint8_t>& values() const noexcept { return values_; }

  friend bool operator==(const GtMask&, const GtMask&) = default;

 private:
  std::size_t index(int x, int y) const {
    if (x < 0 || x >= width_ || y < 0 || y >= height_)
      throw DataError("mask coordinate out of range");
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> values_;
};

/// BT.601 luma: 0.299 r + 0.587 g + 0.114 b, real-valued (not rounded).
GrayImage to_grayscale(const ColorImage& img);

}  // namespace saldet
