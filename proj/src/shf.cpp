#include "saldet/shf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "saldet/error.hpp"

namespace saldet {

namespace {

struct Span1d {
  int start, len;
};

// floor for the origin, ceil for the extent, clipped; never empty for a
// template inside the unit square with positive extent.
Span1d template_span(double frac_start, double frac_extent, int block_extent) {
  int start = static_cast<int>(std::floor(frac_start * block_extent));
  int len = static_cast<int>(std::ceil(frac_extent * block_extent));
  start = std::clamp(start, 0, block_extent - 1);
  len = std::max(len, 1);
  len = std::min(len, block_extent - start);
  return {start, len};
}

}  // namespace

std::vector<TemplateRect> default_templates() {
  return {
      {0.0, 0.0, 1.0, 1.0},
      {0.0, 0.0, 0.5, 0.5},
      {0.5, 0.0, 0.5, 0.5},
      {0.0, 0.5, 0.5, 0.5},
      {0.5, 0.5, 0.5, 0.5},
  };
}

ShfParams default_shf_params() { return ShfParams{default_templates(), 4}; }

void validate(const ShfParams& p) {
  if (p.levels < 2) throw DataError("quantization levels must be >= 2");
  if (p.templates.empty()) throw DataError("template list must be non-empty");
  constexpr double tol = 1e-12;
  for (const auto& t : p.templates) {
    if (t.w <= 0.0 || t.h <= 0.0) throw DataError("template extent must be positive");
    if (t.x < -tol || t.y < -tol || t.x + t.w > 1.0 + tol || t.y + t.h > 1.0 + tol)
      throw DataError("template must lie inside the unit square");
  }
}

int quantize_color(const Rgb& pixel, int levels) {
  const int rb = pixel.r * levels / 256;
  const int gb = pixel.g * levels / 256;
  const int bb = pixel.b * levels / 256;
  return (rb * levels + gb) * levels + bb;
}

SpatialHistogram spatial_histogram(const ColorImage& img, const PixelRect& block,
                                   const ShfParams& params) {
  validate(params);
  if (block.w < 1 || block.h < 1) throw DataError("empty block");
  if (block.x < 0 || block.y < 0 || block.x + block.w > img.width() ||
      block.y + block.h > img.height())
    throw DataError("block extends outside the image");

  const int bins = params.levels * params.levels * params.levels;
  SpatialHistogram sh;
  sh.per_template.reserve(params.templates.size());

  for (const auto& t : params.templates) {
    const Span1d xs = template_span(t.x, t.w, block.w);
    const Span1d ys = template_span(t.y, t.h, block.h);
    std::vector<double> hist(bins, 0.0);
    long count = 0;
    for (int y = block.y + ys.start; y < block.y + ys.start + ys.len; ++y) {
      for (int x = block.x + xs.start; x < block.x + xs.start + xs.len; ++x) {
        hist[quantize_color(img.at(x, y), params.levels)] += 1.0;
        ++count;
      }
    }
    if (count == 0) throw DataError("degenerate template region");
    for (double& v : hist) v /= static_cast<double>(count);
    sh.per_template.push_back(std::move(hist));
  }
  return sh;
}

AverageShf average_histogram(const std::vector<SpatialHistogram>& samples) {
  if (samples.empty()) throw DataError("cannot average an empty sample list");
  const auto& shape = samples.front();

  AverageShf avg;
  avg.sample_count = static_cast<int>(samples.size());
  avg.model.per_template.reserve(shape.per_template.size());
  for (const auto& t : shape.per_template)
    avg.model.per_template.emplace_back(t.size(), 0.0);

  for (const auto& s : samples) {
    if (s.per_template.size() != shape.per_template.size())
      throw DataError("histogram shape mismatch in average");
    for (std::size_t k = 0; k < s.per_template.size(); ++k) {
      if (s.per_template[k].size() != shape.per_template[k].size())
        throw DataError("histogram shape mismatch in average");
      auto& acc = avg.model.per_template[k];
      const auto& src = s.per_template[k];
      for (std::size_t b = 0; b < src.size(); ++b) acc[b] += src[b];
    }
  }
  const double n = static_cast<double>(samples.size());
  for (auto& t : avg.model.per_template)
    for (double& v : t) v /= n;
  return avg;
}

std::vector<double> shf_distance(const SpatialHistogram& sh, const AverageShf& avg,
                                 HistDistance distance) {
  const auto& m = avg.model;
  if (sh.per_template.size() != m.per_template.size())
    throw DataError("histogram shape mismatch in distance");

  std::vector<double> f(sh.per_template.size(), 0.0);
  for (std::size_t k = 0; k < sh.per_template.size(); ++k) {
    const auto& a = sh.per_template[k];
    const auto& b = m.per_template[k];
    if (a.size() != b.size()) throw DataError("histogram shape mismatch in distance");
    double d = 0.0;
    if (distance == HistDistance::l1) {
      for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    } else {
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double s = a[i] + b[i];
        if (s > 0.0) d += (a[i] - b[i]) * (a[i] - b[i]) / s;
      }
    }
    f[k] = d;
  }
  return f;
}

}  // namespace saldet
