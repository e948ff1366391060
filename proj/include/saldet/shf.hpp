#pragma once

#include <vector>

#include "saldet/grid.hpp"
#include "saldet/image.hpp"

namespace saldet {

/// Spatial template in block-relative fractional coordinates (unit square).
struct TemplateRect {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;
};

struct ShfParams {
  std::vector<TemplateRect> templates;
  int levels = 4;  // quantization levels per channel, >= 2
};

/// Full block plus the four quadrants (K = 5).
std::vector<TemplateRect> default_templates();

ShfParams default_shf_params();

void validate(const ShfParams& p);

/// One normalized levels^3-bin color histogram per template.
struct SpatialHistogram {
  std::vector<std::vector<double>> per_template;
};

/// Bin-wise mean over object samples.
struct AverageShf {
  SpatialHistogram model;
  int sample_count = 0;
};

enum class HistDistance { l1, chi2 };

/// Per-channel bin = floor(channel * levels / 256); joint index
/// r_bin*levels^2 + g_bin*levels + b_bin.
int quantize_color(const Rgb& pixel, int levels);

/// Counts quantized colors over each template region of the block and
/// normalizes each histogram to sum 1. Template fractions scale by the block
/// size: floor for the origin, ceil for the extent, clipped to the block.
SpatialHistogram spatial_histogram(const ColorImage& img, const PixelRect& block,
                                   const ShfParams& params);

/// Bin-wise arithmetic mean of the samples.
AverageShf average_histogram(const std::vector<SpatialHistogram>& samples);

/// Per-template distance f_k between a histogram and the average model.
/// L1 and chi-square both range over [0, 2] on normalized histograms.
std::vector<double> shf_distance(const SpatialHistogram& sh, const AverageShf& avg,
                                 HistDistance distance = HistDistance::l1);

}  // namespace saldet
