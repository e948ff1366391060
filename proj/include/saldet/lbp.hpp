#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "saldet/grid.hpp"
#include "saldet/image.hpp"

namespace saldet {

/// Circular neighborhood: P sample points on a radius-R circle.
struct LbpParams {
  int neighbors = 8;   // P, in [4, 24]
  double radius = 1.0; // R, >= 1

  int code_count() const noexcept { return 1 << neighbors; }
};

void validate(const LbpParams& p);

/// Hyperplane variant: neighbor bit set iff the color difference projected
/// onto `normal` is >= 0.
struct ColorLbpParams {
  LbpParams base;
  std::array<double, 3> normal = {0.0, 0.0, 0.0};
};

void validate(const ColorLbpParams& p);

/// Per-block aggregate of LBP codes: arithmetic mean plus the normalized
/// code histogram (2^P bins).
struct LbpSummary {
  double mean_code = 0.0;
  std::vector<double> histogram;
};

/// Sample point p sits at (x_c + R cos(2*pi*p/P), y_c + R sin(2*pi*p/P)),
/// p = 0 .. P-1, with y growing downward.
std::vector<std::array<double, 2>> neighbor_coords(double x_c, double y_c,
                                                   const LbpParams& params);

/// Bilinear blend of the four surrounding pixels; coordinates are clamped to
/// [0, width-1] x [0, height-1] first.
double bilinear_sample(const GrayImage& img, double x, double y);

/// Bit p is set iff the interpolated neighbor intensity >= center intensity
/// (ties count as 1, including exact zero differences on interpolated values).
std::uint32_t lbp_code(const GrayImage& img, int x_c, int y_c, const LbpParams& params);

/// Bit p is set iff n . (neighbor_rgb - center_rgb) >= 0, with each channel
/// sampled bilinearly at the same circle coordinates as lbp_code.
std::uint32_t color_lbp_code(const ColorImage& img, int x_c, int y_c,
                             const ColorLbpParams& params);

/// Codes at every pixel of the block; mean plus normalized histogram.
LbpSummary lbp_block_summary(const GrayImage& img, const PixelRect& block,
                             const LbpParams& params);

/// Hyperplane-code analogue of lbp_block_summary.
LbpSummary color_lbp_block_summary(const ColorImage& img, const PixelRect& block,
                                   const ColorLbpParams& params);

}  // namespace saldet
