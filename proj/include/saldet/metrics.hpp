#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saldet/image.hpp"

namespace saldet {

struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

/// Pixel-wise counts with salient (1) as the positive class. Dimensions must
/// match; callers crop beforehand.
Confusion confusion(const GtMask& pred, const GtMask& gt);

/// precision = tp/(tp+fp), recall = tp/(tp+fn),
/// F = (1+b^2) P R / (b^2 P + R); every 0/0 evaluates to 0.
Prf prf(const Confusion& c, double beta_squared);

struct MetricsReport {
  struct PerImage {
    std::string name;
    Confusion counts;
    Prf scores;
  };
  std::vector<PerImage> per_image;
  Prf macro;          // mean of the per-image metrics
  Prf micro;          // metrics of the pooled counts
  Confusion pooled;
  double beta_squared = 0.3;
};

MetricsReport aggregate(const std::vector<std::pair<std::string, Confusion>>& per_image,
                        double beta_squared);

}  // namespace saldet
