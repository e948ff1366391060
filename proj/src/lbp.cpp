#include "saldet/lbp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "saldet/error.hpp"

namespace saldet {

namespace {

constexpr double kUnitNormTol = 1e-9;

struct Bilinear {
  int x0, y0, x1, y1;
  double fx, fy;
};

// Clamp, split into integer cell and fractional position.
Bilinear locate(double x, double y, int width, int height) {
  x = std::clamp(x, 0.0, static_cast<double>(width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(height - 1));
  Bilinear b;
  b.x0 = static_cast<int>(std::floor(x));
  b.y0 = static_cast<int>(std::floor(y));
  b.x1 = std::min(b.x0 + 1, width - 1);
  b.y1 = std::min(b.y0 + 1, height - 1);
  b.fx = x - b.x0;
  b.fy = y - b.y0;
  return b;
}

// lerp form rather than the 4-weight blend: constant inputs reproduce the
// constant exactly, so tie bits (S(0) = 1) stay deterministic.
double lerp(double a, double b, double t) { return a + t * (b - a); }

std::vector<std::array<double, 2>> neighbor_offsets(const LbpParams& params) {
  std::vector<std::array<double, 2>> out(params.neighbors);
  for (int p = 0; p < params.neighbors; ++p) {
    const double angle = 2.0 * std::numbers::pi * p / params.neighbors;
    out[p] = {params.radius * std::cos(angle), params.radius * std::sin(angle)};
  }
  return out;
}

std::uint32_t code_at(const GrayImage& img, int x_c, int y_c, const LbpParams& params,
                      const std::vector<std::array<double, 2>>& offsets) {
  const double center = img.at(x_c, y_c);
  std::uint32_t code = 0;
  for (int p = 0; p < params.neighbors; ++p) {
    const double v = bilinear_sample(img, x_c + offsets[p][0], y_c + offsets[p][1]);
    if (v - center >= 0.0) code |= (1u << p);
  }
  return code;
}

double bilinear_channel(const ColorImage& img, const Bilinear& b, int channel) {
  auto ch = [&](int x, int y) -> double {
    const Rgb& p = img.at(x, y);
    switch (channel) {
      case 0: return p.r;
      case 1: return p.g;
      default: return p.b;
    }
  };
  const double top = lerp(ch(b.x0, b.y0), ch(b.x1, b.y0), b.fx);
  const double bot = lerp(ch(b.x0, b.y1), ch(b.x1, b.y1), b.fx);
  return lerp(top, bot, b.fy);
}

std::uint32_t color_code_at(const ColorImage& img, int x_c, int y_c,
                            const ColorLbpParams& params,
                            const std::vector<std::array<double, 2>>& offsets) {
  const Rgb& c = img.at(x_c, y_c);
  std::uint32_t code = 0;
  for (int p = 0; p < params.base.neighbors; ++p) {
    const Bilinear b = locate(x_c + offsets[p][0], y_c + offsets[p][1],
                              img.width(), img.height());
    const double e = params.normal[0] * (bilinear_channel(img, b, 0) - c.r) +
                     params.normal[1] * (bilinear_channel(img, b, 1) - c.g) +
                     params.normal[2] * (bilinear_channel(img, b, 2) - c.b);
    if (e >= 0.0) code |= (1u << p);
  }
  return code;
}

template <typename CodeFn>
LbpSummary block_summary(const PixelRect& block, int code_count, CodeFn&& code_fn) {
  if (block.w < 1 || block.h < 1) throw DataError("empty block");
  LbpSummary s;
  s.histogram.assign(code_count, 0.0);
  for (int y = block.y; y < block.y + block.h; ++y)
    for (int x = block.x; x < block.x + block.w; ++x)
      s.histogram[code_fn(x, y)] += 1.0;

  const double n = static_cast<double>(block.w) * block.h;
  double mean = 0.0;
  for (int c = 0; c < code_count; ++c) {
    s.histogram[c] /= n;
    mean += c * s.histogram[c];
  }
  s.mean_code = mean;
  return s;
}

void check_center(int x_c, int y_c, int width, int height) {
  if (x_c < 0 || x_c >= width || y_c < 0 || y_c >= height)
    throw DataError("LBP center lies outside the image");
}

void check_block(const PixelRect& b, int width, int height) {
  if (b.w < 1 || b.h < 1) throw DataError("empty block");
  if (b.x < 0 || b.y < 0 || b.x + b.w > width || b.y + b.h > height)
    throw DataError("block extends outside the image");
}

}  // namespace

void validate(const LbpParams& p) {
  if (p.neighbors < 4 || p.neighbors > 24)
    throw DataError("LBP neighbor count must lie in [4, 24]");
  if (p.radius < 1.0) throw DataError("LBP radius must be >= 1");
}

void validate(const ColorLbpParams& p) {
  validate(p.base);
  const double norm = std::sqrt(p.normal[0] * p.normal[0] + p.normal[1] * p.normal[1] +
                                p.normal[2] * p.normal[2]);
  if (std::abs(norm - 1.0) > kUnitNormTol)
    throw DataError("color LBP normal must be unit length");
}

std::vector<std::array<double, 2>> neighbor_coords(double x_c, double y_c,
                                                   const LbpParams& params) {
  validate(params);
  auto out = neighbor_offsets(params);
  for (auto& c : out) {
    c[0] += x_c;
    c[1] += y_c;
  }
  return out;
}

double bilinear_sample(const GrayImage& img, double x, double y) {
  const Bilinear b = locate(x, y, img.width(), img.height());
  const double top = lerp(img.at(b.x0, b.y0), img.at(b.x1, b.y0), b.fx);
  const double bot = lerp(img.at(b.x0, b.y1), img.at(b.x1, b.y1), b.fx);
  return lerp(top, bot, b.fy);
}

std::uint32_t lbp_code(const GrayImage& img, int x_c, int y_c, const LbpParams& params) {
  validate(params);
  check_center(x_c, y_c, img.width(), img.height());
  return code_at(img, x_c, y_c, params, neighbor_offsets(params));
}

std::uint32_t color_lbp_code(const ColorImage& img, int x_c, int y_c,
                             const ColorLbpParams& params) {
  validate(params);
  check_center(x_c, y_c, img.width(), img.height());
  return color_code_at(img, x_c, y_c, params, neighbor_offsets(params.base));
}

LbpSummary lbp_block_summary(const GrayImage& img, const PixelRect& block,
                             const LbpParams& params) {
  validate(params);
  check_block(block, img.width(), img.height());
  const auto offsets = neighbor_offsets(params);
  return block_summary(block, params.code_count(), [&](int x, int y) {
    return code_at(img, x, y, params, offsets);
  });
}

LbpSummary color_lbp_block_summary(const ColorImage& img, const PixelRect& block,
                                   const ColorLbpParams& params) {
  validate(params);
  check_block(block, img.width(), img.height());
  const auto offsets = neighbor_offsets(params.base);
  return block_summary(block, params.base.code_count(), [&](int x, int y) {
    return color_code_at(img, x, y, params, offsets);
  });
}

}  // namespace saldet
