#include "saldet/metrics.hpp"

#include <utility>

#include "saldet/error.hpp"

namespace saldet {

Confusion confusion(const GtMask& pred, const GtMask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height())
    throw DataError("prediction and ground-truth dimensions differ");
  Confusion c;
  const auto& p = pred.values();
  const auto& g = gt.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (g[i]) {
      if (p[i]) ++c.tp; else ++c.fn;
    } else {
      if (p[i]) ++c.fp; else ++c.tn;
    }
  }
  return c;
}

Prf prf(const Confusion& c, double beta_squared) {
  if (beta_squared < 0.0) throw DataError("beta squared must be >= 0");
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
  Prf out;
  out.precision = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
  out.recall = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  out.f_measure = ratio((1.0 + beta_squared) * out.precision * out.recall,
                        beta_squared * out.precision + out.recall);
  return out;
}

MetricsReport aggregate(const std::vector<std::pair<std::string, Confusion>>& per_image,
                        double beta_squared) {
  if (per_image.empty()) throw DataError("cannot aggregate an empty image list");

  MetricsReport report;
  report.beta_squared = beta_squared;
  report.per_image.reserve(per_image.size());

  for (const auto& [name, counts] : per_image) {
    report.per_image.push_back({name, counts, prf(counts, beta_squared)});
    report.pooled += counts;
    report.macro.precision += report.per_image.back().scores.precision;
    report.macro.recall += report.per_image.back().scores.recall;
    report.macro.f_measure += report.per_image.back().scores.f_measure;
  }
  const double n = static_cast<double>(per_image.size());
  report.macro.precision /= n;
  report.macro.recall /= n;
  report.macro.f_measure /= n;
  report.micro = prf(report.pooled, beta_squared);
  return report;
}

}  // namespace saldet
