#include <doctest.h>

#include <cmath>
#include <random>

#include "saldet/error.hpp"
#include "saldet/integrate.hpp"
#include "support/det_random.hpp"

using namespace saldet;

namespace {

LbpSummary summary_with_mean(double mean) {
  LbpSummary s;
  s.mean_code = mean;
  return s;
}

}  // namespace

TEST_CASE("raw product: annihilators and plain arithmetic") {
  const std::vector<double> f{0.5, 1.0, 2.0};
  for (double v : raw_product(summary_with_mean(0.0), f)) CHECK(v == 0.0);
  for (double v : raw_product(summary_with_mean(123.0), {0.0, 0.0})) CHECK(v == 0.0);
  const auto out = raw_product(summary_with_mean(200.0), {0.5});
  CHECK(out[0] == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("fit normalization: identical products degenerate to sigma zero") {
  const std::vector<double> v{1.5, 0.25};
  const auto p = fit_normalization({v, v, v});
  CHECK(p.mu[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(p.mu[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p.sigma[0] == 0.0);
  CHECK(p.sigma[1] == 0.0);

  // The guarded divisor kicks in: outputs stay finite.
  const auto feat = integrate_features(summary_with_mean(100.0), {0.5, 0.5}, p);
  for (double x : feat) CHECK(std::isfinite(x));
}

TEST_CASE("fit normalization: two-point statistics") {
  const auto p = fit_normalization({{0.0}, {2.0}});
  CHECK(p.mu[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.sigma[0] == doctest::Approx(1.0).epsilon(1e-12));  // population deviation
}

TEST_CASE("fit normalization: matches a two-pass oracle on 1000 random products") {
  std::mt19937_64 rng(51);
  std::vector<std::vector<double>> products(1000, std::vector<double>(3));
  for (auto& v : products)
    for (double& x : v) x = testsupport::uniform(rng, 0.0, 100.0);

  const auto p = fit_normalization(products);
  for (int k = 0; k < 3; ++k) {
    double mean = 0.0;
    for (const auto& v : products) mean += v[k];
    mean /= 1000.0;
    double var = 0.0;
    for (const auto& v : products) var += (v[k] - mean) * (v[k] - mean);
    var /= 1000.0;
    CHECK(std::abs(p.mu[k] - mean) <= 1e-9 * std::max(1.0, std::abs(mean)));
    CHECK(std::abs(p.sigma[k] - std::sqrt(var)) <= 1e-9 * std::max(1.0, std::sqrt(var)));
  }
}

TEST_CASE("fit normalization requires at least two particles") {
  CHECK_THROWS_AS(fit_normalization({}), DataError);
  CHECK_THROWS_AS(fit_normalization({{1.0}}), DataError);
  CHECK_THROWS_AS(fit_normalization({{1.0}, {1.0, 2.0}}), DataError);
}

TEST_CASE("integrate features: definition, bias, and zero cases") {
  IntegrationParams p;
  p.mu = {2.0, 4.0};
  p.sigma = {0.5, 0.25};

  // raw product equal to sigma*mu maps to exactly 1.
  // mean 8, f0 = 0.25 -> raw 1.0 = 0.5*2.0; f1 = 0.25 -> raw 1.0 = 0.25*4.0.
  const auto v = integrate_features(summary_with_mean(8.0), {0.25, 0.25}, p);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v[2] == 1.0);

  const auto zeros = integrate_features(summary_with_mean(0.0), {0.7, 0.1}, p);
  CHECK(zeros[0] == 0.0);
  CHECK(zeros[1] == 0.0);
  CHECK(zeros[2] == 1.0);
}

TEST_CASE("integrate features: matches the formula on random inputs") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    IntegrationParams p;
    p.mu = {testsupport::uniform(rng, 0.1, 50.0), testsupport::uniform(rng, 0.1, 50.0)};
    p.sigma = {testsupport::uniform(rng, 0.1, 20.0), testsupport::uniform(rng, 0.1, 20.0)};
    const double mean = testsupport::uniform(rng, 0.0, 255.0);
    const std::vector<double> f{testsupport::uniform(rng, 0.0, 2.0),
                                testsupport::uniform(rng, 0.0, 2.0)};
    const auto v = integrate_features(summary_with_mean(mean), f, p);
    for (int k = 0; k < 2; ++k) {
      const double expected = (mean * f[k] / 2.0) / (p.sigma[k] * p.mu[k]);
      CHECK(v[k] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("integrate features: homogeneous in the raw product") {
  IntegrationParams p;
  p.mu = {3.0};
  p.sigma = {1.5};
  const double s = 7.0;
  const auto base = integrate_features(summary_with_mean(10.0), {0.4}, p);
  const auto scaled = integrate_features(summary_with_mean(10.0 * s), {0.4}, p);
  CHECK(scaled[0] == doctest::Approx(s * base[0]).epsilon(1e-12));
}

TEST_CASE("integrate features: finite for degenerate normalization constants") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    IntegrationParams p;
    const int degenerate = trial % 3;
    p.mu = {degenerate == 0 ? 0.0 : testsupport::uniform(rng, 0.0, 1e-12)};
    p.sigma = {degenerate == 1 ? 0.0 : testsupport::uniform(rng, 0.0, 1e-12)};
    const auto v = integrate_features(summary_with_mean(testsupport::uniform(rng, 0.0, 255.0)),
                                      {testsupport::uniform(rng, 0.0, 2.0)}, p);
    CHECK(std::isfinite(v[0]));
    CHECK(v[1] == 1.0);
  }
}

TEST_CASE("integrate features rejects mismatched shapes") {
  IntegrationParams p;
  p.mu = {1.0, 2.0};
  p.sigma = {1.0};
  CHECK_THROWS_AS(integrate_features(summary_with_mean(1.0), {0.5, 0.5}, p), DataError);
}
