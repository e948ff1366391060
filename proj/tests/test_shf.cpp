#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "saldet/error.hpp"
#include "saldet/shf.hpp"
#include "support/det_random.hpp"

using namespace saldet;

namespace {

ColorImage random_color(std::mt19937_64& rng, int w, int h) {
  ColorImage img(w, h);
  for (auto& p : img.pixels())
    p = {static_cast<std::uint8_t>(rng() % 256), static_cast<std::uint8_t>(rng() % 256),
         static_cast<std::uint8_t>(rng() % 256)};
  return img;
}

SpatialHistogram point_mass(int templates, int bins, int bin) {
  SpatialHistogram sh;
  for (int k = 0; k < templates; ++k) {
    std::vector<double> h(bins, 0.0);
    h[bin] = 1.0;
    sh.per_template.push_back(std::move(h));
  }
  return sh;
}

SpatialHistogram random_normalized(std::mt19937_64& rng, int templates, int bins) {
  SpatialHistogram sh;
  for (int k = 0; k < templates; ++k) {
    std::vector<double> h(bins);
    double sum = 0.0;
    for (double& v : h) {
      v = testsupport::uniform(rng, 0.0, 1.0);
      sum += v;
    }
    for (double& v : h) v /= sum;
    sh.per_template.push_back(std::move(h));
  }
  return sh;
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace

TEST_CASE("quantize_color corner and interior bins") {
  CHECK(quantize_color({0, 0, 0}, 4) == 0);
  CHECK(quantize_color({255, 255, 255}, 4) == 63);
  // bins (1, 2, 3) -> 1*16 + 2*4 + 3
  CHECK(quantize_color({64, 128, 192}, 4) == 27);
  CHECK(quantize_color({255, 0, 255}, 2) == 5);
}

TEST_CASE("spatial histogram: monochromatic block is a point mass everywhere") {
  ColorImage img(16, 16);
  for (auto& p : img.pixels()) p = {200, 40, 90};
  const auto params = default_shf_params();
  const auto sh = spatial_histogram(img, PixelRect{0, 0, 16, 16}, params);
  const int bin = quantize_color({200, 40, 90}, params.levels);
  REQUIRE(sh.per_template.size() == 5);
  for (const auto& h : sh.per_template) {
    CHECK(h[bin] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("spatial histogram: two-color halves split the full-block template evenly") {
  ColorImage img(16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) img.at(x, y) = x < 8 ? Rgb{255, 0, 0} : Rgb{0, 0, 255};
  ShfParams params{{{0.0, 0.0, 1.0, 1.0}}, 4};
  const auto sh = spatial_histogram(img, PixelRect{0, 0, 16, 16}, params);
  CHECK(sh.per_template[0][quantize_color({255, 0, 0}, 4)] == doctest::Approx(0.5));
  CHECK(sh.per_template[0][quantize_color({0, 0, 255}, 4)] == doctest::Approx(0.5));
}

TEST_CASE("spatial histogram: matches a naive per-pixel recount on the default templates") {
  std::mt19937_64 rng(41);
  const auto img = random_color(rng, 20, 20);
  const PixelRect block{2, 2, 16, 16};
  const auto params = default_shf_params();
  const auto sh = spatial_histogram(img, block, params);

  // Default template spans of a 16px block are the whole block and the four
  // 8x8 quadrants; recount each region directly.
  struct Region { int x, y, w, h; };
  const Region regions[5] = {
      {0, 0, 16, 16}, {0, 0, 8, 8}, {8, 0, 8, 8}, {0, 8, 8, 8}, {8, 8, 8, 8}};
  for (int k = 0; k < 5; ++k) {
    std::vector<double> counts(64, 0.0);
    for (int y = regions[k].y; y < regions[k].y + regions[k].h; ++y)
      for (int x = regions[k].x; x < regions[k].x + regions[k].w; ++x)
        counts[quantize_color(img.at(block.x + x, block.y + y), 4)] += 1.0;
    const double n = static_cast<double>(regions[k].w) * regions[k].h;
    for (int bin = 0; bin < 64; ++bin)
      CHECK(sh.per_template[k][bin] == doctest::Approx(counts[bin] / n).epsilon(1e-12));
  }
}

TEST_CASE("spatial histogram: every template histogram sums to one") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    const auto img = random_color(rng, 24, 24);
    const auto sh = spatial_histogram(img, PixelRect{4, 4, 16, 16}, default_shf_params());
    for (const auto& h : sh.per_template) {
      double sum = 0.0;
      for (double v : h) {
        sum += v;
        CHECK(v >= 0.0);
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("spatial histogram is permutation-invariant within a template region") {
  std::mt19937_64 rng(43);
  auto img = random_color(rng, 16, 16);
  ShfParams params{{{0.0, 0.0, 1.0, 1.0}}, 4};
  const auto before = spatial_histogram(img, PixelRect{0, 0, 16, 16}, params);

  // Deterministic Fisher-Yates over all block pixels.
  auto& px = img.pixels();
  for (std::size_t i = px.size(); i > 1; --i) std::swap(px[i - 1], px[rng() % i]);
  const auto after = spatial_histogram(img, PixelRect{0, 0, 16, 16}, params);
  for (int bin = 0; bin < 64; ++bin)
    CHECK(before.per_template[0][bin] == after.per_template[0][bin]);
}

TEST_CASE("spatial histogram rejects bad inputs") {
  ColorImage img(8, 8);
  CHECK_THROWS_AS(spatial_histogram(img, PixelRect{0, 0, 16, 16}, default_shf_params()),
                  DataError);
  CHECK_THROWS_AS(spatial_histogram(img, PixelRect{0, 0, 0, 8}, default_shf_params()), DataError);
  ShfParams bad{{{0.0, 0.0, 1.5, 1.0}}, 4};
  CHECK_THROWS_AS(spatial_histogram(img, PixelRect{0, 0, 8, 8}, bad), DataError);
  ShfParams empty_templates{{}, 4};
  CHECK_THROWS_AS(spatial_histogram(img, PixelRect{0, 0, 8, 8}, empty_templates), DataError);
}

TEST_CASE("average histogram: one sample reproduces itself") {
  std::mt19937_64 rng(44);
  const auto sh = random_normalized(rng, 3, 8);
  const auto avg = average_histogram({sh});
  CHECK(avg.sample_count == 1);
  for (int k = 0; k < 3; ++k)
    for (int b = 0; b < 8; ++b)
      CHECK(avg.model.per_template[k][b] == doctest::Approx(sh.per_template[k][b]).epsilon(1e-12));
}

TEST_CASE("average histogram: two point masses average to half each") {
  const auto a = point_mass(2, 16, 3);
  const auto b = point_mass(2, 16, 9);
  const auto avg = average_histogram({a, b});
  for (int k = 0; k < 2; ++k) {
    CHECK(avg.model.per_template[k][3] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(avg.model.per_template[k][9] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("average histogram: matches scalar accumulation on random samples") {
  std::mt19937_64 rng(45);
  std::vector<SpatialHistogram> samples;
  for (int i = 0; i < 10; ++i) samples.push_back(random_normalized(rng, 4, 27));
  const auto avg = average_histogram(samples);
  for (int k = 0; k < 4; ++k)
    for (int b = 0; b < 27; ++b) {
      double acc = 0.0;
      for (const auto& s : samples) acc += s.per_template[k][b];
      CHECK(std::abs(avg.model.per_template[k][b] - acc / 10.0) <= 1e-12);
    }
}

TEST_CASE("average histogram output lies within the per-bin sample range") {
  std::mt19937_64 rng(46);
  std::vector<SpatialHistogram> samples;
  for (int i = 0; i < 7; ++i) samples.push_back(random_normalized(rng, 2, 12));
  const auto avg = average_histogram(samples);
  for (int k = 0; k < 2; ++k)
    for (int b = 0; b < 12; ++b) {
      double lo = 1.0, hi = 0.0;
      for (const auto& s : samples) {
        lo = std::min(lo, s.per_template[k][b]);
        hi = std::max(hi, s.per_template[k][b]);
      }
      CHECK(avg.model.per_template[k][b] >= lo - 1e-12);
      CHECK(avg.model.per_template[k][b] <= hi + 1e-12);
    }
}

TEST_CASE("average histogram rejects empty and mismatched inputs") {
  CHECK_THROWS_AS(average_histogram({}), DataError);
  const auto a = point_mass(2, 8, 0);
  const auto b = point_mass(3, 8, 0);
  CHECK_THROWS_AS(average_histogram({a, b}), DataError);
}

TEST_CASE("shf distance: identity, maximal separation, and random agreement") {
  std::mt19937_64 rng(47);
  const auto sh = random_normalized(rng, 5, 64);
  const AverageShf self{sh, 1};
  for (double f : shf_distance(sh, self)) CHECK(f == doctest::Approx(0.0).epsilon(1e-12));

  const AverageShf far{point_mass(5, 64, 7), 1};
  const auto disjoint = point_mass(5, 64, 19);
  for (double f : shf_distance(disjoint, far)) CHECK(f == doctest::Approx(2.0).epsilon(1e-12));

  const auto other = random_normalized(rng, 5, 64);
  const AverageShf avg{other, 3};
  const auto f = shf_distance(sh, avg);
  for (int k = 0; k < 5; ++k) {
    CHECK(std::abs(f[k] - l1(sh.per_template[k], other.per_template[k])) <= 1e-12);
    CHECK(f[k] >= 0.0);
    CHECK(f[k] <= 2.0);
  }
}

TEST_CASE("shf distance: chi-square variant shares the identity and range") {
  std::mt19937_64 rng(48);
  const auto sh = random_normalized(rng, 2, 16);
  const AverageShf self{sh, 1};
  for (double f : shf_distance(sh, self, HistDistance::chi2))
    CHECK(f == doctest::Approx(0.0).epsilon(1e-12));

  const AverageShf far{point_mass(2, 16, 1), 1};
  for (double f : shf_distance(point_mass(2, 16, 14), far, HistDistance::chi2))
    CHECK(f == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("shf distance is a metric on random normalized histograms") {
  std::mt19937_64 rng(49);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_normalized(rng, 1, 10);
    const auto b = random_normalized(rng, 1, 10);
    const auto c = random_normalized(rng, 1, 10);
    const double ab = shf_distance(a, AverageShf{b, 1})[0];
    const double ba = shf_distance(b, AverageShf{a, 1})[0];
    const double ac = shf_distance(a, AverageShf{c, 1})[0];
    const double cb = shf_distance(c, AverageShf{b, 1})[0];
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));       // symmetry
    CHECK(ab <= ac + cb + 1e-12);                          // triangle inequality
  }
}

TEST_CASE("shf distance rejects shape mismatches") {
  const auto a = point_mass(2, 8, 0);
  CHECK_THROWS_AS(shf_distance(a, AverageShf{point_mass(3, 8, 0), 1}), DataError);
  CHECK_THROWS_AS(shf_distance(a, AverageShf{point_mass(2, 16, 0), 1}), DataError);
}
