#include "saldet/integrate.hpp"

#include <cmath>

#include "saldet/error.hpp"

namespace saldet {

std::vector<double> raw_product(const LbpSummary& summary, const std::vector<double>& f) {
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = summary.mean_code * f[k] / 2.0;
  return out;
}

IntegrationParams fit_normalization(const std::vector<std::vector<double>>& training_products) {
  if (training_products.size() < 2)
    throw DataError("normalization needs at least two training particles");
  const std::size_t dim = training_products.front().size();

  IntegrationParams p;
  p.mu.assign(dim, 0.0);
  p.sigma.assign(dim, 0.0);

  for (const auto& v : training_products) {
    if (v.size() != dim) throw DataError("raw product dimension mismatch");
    for (std::size_t k = 0; k < dim; ++k) p.mu[k] += v[k];
  }
  const double n = static_cast<double>(training_products.size());
  for (double& m : p.mu) m /= n;

  for (const auto& v : training_products) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = v[k] - p.mu[k];
      p.sigma[k] += d * d;
    }
  }
  for (double& s : p.sigma) s = std::sqrt(s / n);
  return p;
}

std::vector<double> integrate_features(const LbpSummary& summary, const std::vector<double>& f,
                                       const IntegrationParams& params) {
  if (f.size() != params.mu.size() || f.size() != params.sigma.size())
    throw DataError("feature dimension does not match normalization constants");

  const auto raw = raw_product(summary, f);
  std::vector<double> out(raw.size() + 1);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    double divisor = params.sigma[k] * params.mu[k];
    if (std::abs(divisor) < params.epsilon) divisor = params.epsilon;
    out[k] = raw[k] / divisor;
  }
  out.back() = 1.0;  // bias
  return out;
}

}  // namespace saldet
