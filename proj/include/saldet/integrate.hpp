#pragma once

#include <span>
#include <vector>

#include "saldet/lbp.hpp"

namespace saldet {

/// Dataset normalization constants for the integrated feature: per-template
/// mean and population standard deviation of the raw product, with a guard
/// against degenerate divisors.
struct IntegrationParams {
  std::vector<double> mu;
  std::vector<double> sigma;
  double epsilon = 1e-8;
};

/// Per-particle feature vectors laid out row-major over the grid; the last
/// component of every vector is the constant bias 1.
class FeatureGrid {
 public:
  FeatureGrid(int cols, int rows, int dim)
      : cols_(cols), rows_(rows), dim_(dim) {
    if (cols < 1 || rows < 1 || dim < 1)
      throw DataError("feature grid dimensions must be at least 1");
    values_.resize(static_cast<std::size_t>(cols) * rows * dim, 0.0);
  }

  int cols() const noexcept { return cols_; }
  int rows() const noexcept { return rows_; }
  int dim() const noexcept { return dim_; }
  int count() const noexcept { return cols_ * rows_; }

  std::span<const double> site(int row, int col) const {
    return {values_.data() + offset(row, col), static_cast<std::size_t>(dim_)};
  }
  std::span<double> site(int row, int col) {
    return {values_.data() + offset(row, col), static_cast<std::size_t>(dim_)};
  }

 private:
  std::size_t offset(int row, int col) const {
    return (static_cast<std::size_t>(row) * cols_ + col) * dim_;
  }

  int cols_;
  int rows_;
  int dim_;
  std::vector<double> values_;
};

/// out_k = mean_code * f_k / 2.
std::vector<double> raw_product(const LbpSummary& summary, const std::vector<double>& f);

/// mu_k / sigma_k = mean / population standard deviation of raw product
/// component k over the training particles. Needs at least two particles.
IntegrationParams fit_normalization(const std::vector<std::vector<double>>& training_products);

/// Component k = raw_product_k / (sigma_k * mu_k), with the divisor replaced
/// by epsilon when its magnitude falls below epsilon; a trailing bias 1 is
/// appended.
std::vector<double> integrate_features(const LbpSummary& summary, const std::vector<double>& f,
                                       const IntegrationParams& params);

}  // namespace saldet
