#include "saldet/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "saldet/error.hpp"

namespace saldet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logaddexp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (std::isinf(b)) return a;  // covers both operands being -inf
  return a + std::log1p(std::exp(b - a));
}

double logsumexp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (std::isinf(m)) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void check_model(const CrfModel& model, const FeatureGrid& features) {
  if (model.feature_dim() != features.dim())
    throw ModelError("model weight dimension " + std::to_string(model.feature_dim()) +
                     " does not match feature dimension " + std::to_string(features.dim()));
  for (double w : model.unary_weights)
    if (!std::isfinite(w)) throw ModelError("non-finite model weight");
  if (!std::isfinite(model.pairwise_weight)) throw ModelError("non-finite model weight");
}

void check_labels(const FeatureGrid& features, const LabelGrid& labels) {
  if (labels.cols() != features.cols() || labels.rows() != features.rows())
    throw DataError("label grid dimensions do not match the feature grid");
}

// Unary score of label 1 at every site (label 0 scores zero).
std::vector<double> unary_field(const CrfModel& model, const FeatureGrid& features) {
  std::vector<double> u(static_cast<std::size_t>(features.count()), 0.0);
  for (int r = 0; r < features.rows(); ++r) {
    for (int c = 0; c < features.cols(); ++c) {
      const auto phi = features.site(r, c);
      double s = 0.0;
      for (int j = 0; j < features.dim(); ++j) s += model.unary_weights[j] * phi[j];
      u[static_cast<std::size_t>(r) * features.cols() + c] = s;
    }
  }
  return u;
}

void check_exact_height(int rows, int max_rows) {
  if (max_rows < 1 || max_rows > 20)
    throw DataError("exact inference row cap must lie in [1, 20]");
  if (rows > max_rows)
    throw DataError("grid has " + std::to_string(rows) +
                    " rows; exact inference is capped at " + std::to_string(max_rows));
}

// Local log-weight of one column state: unary terms of set bits plus the
// Potts weight for each vertically adjacent agreeing pair. Clamped sites
// force their bit; incompatible states get -inf. clamp entries: -1 free.
std::vector<double> column_weights(const std::vector<double>& u, int rows, int cols, int col,
                                   double wp, const std::vector<std::int8_t>* clamp) {
  std::vector<double> a(std::size_t{1} << rows, 0.0);
  for (std::uint32_t s = 0; s < a.size(); ++s) {
    double w = 0.0;
    bool ok = true;
    for (int r = 0; r < rows; ++r) {
      const int bit = (s >> r) & 1;
      if (clamp) {
        const std::int8_t cl = (*clamp)[static_cast<std::size_t>(r) * cols + col];
        if (cl >= 0 && cl != bit) {
          ok = false;
          break;
        }
      }
      if (bit) w += u[static_cast<std::size_t>(r) * cols + col];
      if (r + 1 < rows && bit == static_cast<int>((s >> (r + 1)) & 1)) w += wp;
    }
    a[s] = ok ? w : kNegInf;
  }
  return a;
}

// In-place transfer across one column boundary. The cross factor decomposes
// per row (w * [same bit]), so the full 2^rows x 2^rows transfer reduces to
// one binary butterfly per row: after folding row r, bit r of the index
// refers to the target column.
void fold_transfer_sum(std::vector<double>& v, int rows, double wp) {
  for (int r = 0; r < rows; ++r) {
    const std::size_t bit = std::size_t{1} << r;
    for (std::size_t s = 0; s < v.size(); ++s) {
      if (s & bit) continue;
      const double v0 = v[s];
      const double v1 = v[s | bit];
      v[s] = logaddexp(v0 + wp, v1);
      v[s | bit] = logaddexp(v0, v1 + wp);
    }
  }
}

void fold_transfer_max(std::vector<double>& v, int rows, double wp) {
  for (int r = 0; r < rows; ++r) {
    const std::size_t bit = std::size_t{1} << r;
    for (std::size_t s = 0; s < v.size(); ++s) {
      if (s & bit) continue;
      const double v0 = v[s];
      const double v1 = v[s | bit];
      v[s] = std::max(v0 + wp, v1);
      v[s | bit] = std::max(v0, v1 + wp);
    }
  }
}

double max_score_clamped(const std::vector<double>& u, int rows, int cols, double wp,
                         const std::vector<std::int8_t>* clamp) {
  std::vector<double> f = column_weights(u, rows, cols, 0, wp, clamp);
  for (int c = 1; c < cols; ++c) {
    fold_transfer_max(f, rows, wp);
    const auto a = column_weights(u, rows, cols, c, wp, clamp);
    for (std::size_t s = 0; s < f.size(); ++s) f[s] += a[s];
  }
  return *std::max_element(f.begin(), f.end());
}

LabelGrid map_exact(const CrfModel& model, const FeatureGrid& features, int max_rows) {
  const int rows = features.rows();
  const int cols = features.cols();
  check_exact_height(rows, max_rows);
  const auto u = unary_field(model, features);
  const double wp = model.pairwise_weight;

  const double best = max_score_clamped(u, rows, cols, wp, nullptr);
  // Equal-score candidates may be re-derived through a different clamp
  // schedule, so the comparison tolerates summation-order rounding.
  const double eps = 1e-9 * (1.0 + std::abs(best));

  std::vector<std::int8_t> clamp(static_cast<std::size_t>(rows) * cols, -1);
  LabelGrid out(cols, rows);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      auto& site = clamp[static_cast<std::size_t>(r) * cols + c];
      site = 0;
      if (max_score_clamped(u, rows, cols, wp, &clamp) >= best - eps) {
        out.set(r, c, 0);
      } else {
        site = 1;
        out.set(r, c, 1);
      }
    }
  }
  return out;
}

LabelGrid map_icm(const CrfModel& model, const FeatureGrid& features) {
  const int rows = features.rows();
  const int cols = features.cols();
  const auto u = unary_field(model, features);
  const double wp = model.pairwise_weight;

  LabelGrid labels(cols, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      labels.set(r, c, u[static_cast<std::size_t>(r) * cols + c] > 0.0 ? 1 : 0);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool changed = false;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const int cur = labels.at(r, c);
        const int alt = 1 - cur;
        double delta = (alt - cur) * u[static_cast<std::size_t>(r) * cols + c];
        const int dr[4] = {-1, 1, 0, 0};
        const int dc[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
          const int nr = r + dr[k];
          const int nc = c + dc[k];
          if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
          const int nb = labels.at(nr, nc);
          delta += wp * ((alt == nb ? 1.0 : 0.0) - (cur == nb ? 1.0 : 0.0));
        }
        if (delta > 0.0) {
          labels.set(r, c, alt);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return labels;
}

int count_gold_agreements(const LabelGrid& labels) {
  int agree = 0;
  for (int r = 0; r < labels.rows(); ++r) {
    for (int c = 0; c < labels.cols(); ++c) {
      if (c + 1 < labels.cols() && labels.at(r, c) == labels.at(r, c + 1)) ++agree;
      if (r + 1 < labels.rows() && labels.at(r, c) == labels.at(r + 1, c)) ++agree;
    }
  }
  return agree;
}

void apply_l2(Gradient& g, const CrfModel& model, double l2) {
  if (l2 <= 0.0) return;
  double norm2 = 0.0;
  for (int j = 0; j < model.feature_dim(); ++j) {
    g.values[j] -= l2 * model.unary_weights[j];
    norm2 += model.unary_weights[j] * model.unary_weights[j];
  }
  g.values.back() -= l2 * model.pairwise_weight;
  norm2 += model.pairwise_weight * model.pairwise_weight;
  g.objective -= 0.5 * l2 * norm2;
}

}  // namespace

void validate(const TrainConfig& cfg) {
  if (cfg.alpha < 0.0 || !std::isfinite(cfg.alpha))
    throw ConfigError("learning rate must be a finite non-negative real");
  if (cfg.epochs < 1) throw ConfigError("epoch count must be >= 1");
  if (cfg.l2 < 0.0 || !std::isfinite(cfg.l2))
    throw ConfigError("l2 coefficient must be a finite non-negative real");
  if (cfg.max_exact_height < 1 || cfg.max_exact_height > 20)
    throw ConfigError("max exact height must lie in [1, 20]");
}

double MarginalResult::expected_agreement() const {
  double total = 0.0;
  for (double v : down_agree) total += v;
  for (double v : right_agree) total += v;
  return total;
}

double score(const CrfModel& model, const FeatureGrid& features, const LabelGrid& labels) {
  check_model(model, features);
  check_labels(features, labels);
  double s = 0.0;
  for (int r = 0; r < features.rows(); ++r) {
    for (int c = 0; c < features.cols(); ++c) {
      if (!labels.at(r, c)) continue;
      const auto phi = features.site(r, c);
      for (int j = 0; j < features.dim(); ++j) s += model.unary_weights[j] * phi[j];
    }
  }
  s += model.pairwise_weight * count_gold_agreements(labels);
  return s;
}

double log_partition_brute(const CrfModel& model, const FeatureGrid& features) {
  check_model(model, features);
  const int n = features.count();
  if (n > 20) throw DataError("brute-force partition is limited to 20 sites");

  const int rows = features.rows();
  const int cols = features.cols();
  const auto u = unary_field(model, features);
  const double wp = model.pairwise_weight;

  std::vector<double> scores;
  scores.reserve(std::size_t{1} << n);
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m) {
    auto label = [&](int r, int c) -> int { return (m >> (r * cols + c)) & 1; };
    double s = 0.0;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (label(r, c)) s += u[static_cast<std::size_t>(r) * cols + c];
        if (c + 1 < cols && label(r, c) == label(r, c + 1)) s += wp;
        if (r + 1 < rows && label(r, c) == label(r + 1, c)) s += wp;
      }
    }
    scores.push_back(s);
  }
  return logsumexp(scores);
}

double log_partition_dp(const CrfModel& model, const FeatureGrid& features, int max_rows) {
  check_model(model, features);
  const int rows = features.rows();
  const int cols = features.cols();
  check_exact_height(rows, max_rows);
  const auto u = unary_field(model, features);
  const double wp = model.pairwise_weight;

  std::vector<double> f = column_weights(u, rows, cols, 0, wp, nullptr);
  for (int c = 1; c < cols; ++c) {
    fold_transfer_sum(f, rows, wp);
    const auto a = column_weights(u, rows, cols, c, wp, nullptr);
    for (std::size_t s = 0; s < f.size(); ++s) f[s] += a[s];
  }
  return logsumexp(f);
}

MarginalResult marginals(const CrfModel& model, const FeatureGrid& features, int max_rows) {
  check_model(model, features);
  const int rows = features.rows();
  const int cols = features.cols();
  check_exact_height(rows, max_rows);
  const auto u = unary_field(model, features);
  const double wp = model.pairwise_weight;
  const std::size_t states = std::size_t{1} << rows;

  std::vector<std::vector<double>> a(cols);
  for (int c = 0; c < cols; ++c) a[c] = column_weights(u, rows, cols, c, wp, nullptr);

  std::vector<std::vector<double>> fwd(cols), bwd(cols);
  fwd[0] = a[0];
  for (int c = 1; c < cols; ++c) {
    fwd[c] = fwd[c - 1];
    fold_transfer_sum(fwd[c], rows, wp);
    for (std::size_t s = 0; s < states; ++s) fwd[c][s] += a[c][s];
  }
  bwd[cols - 1].assign(states, 0.0);
  for (int c = cols - 2; c >= 0; --c) {
    bwd[c] = bwd[c + 1];
    for (std::size_t s = 0; s < states; ++s) bwd[c][s] += a[c + 1][s];
    fold_transfer_sum(bwd[c], rows, wp);
  }

  MarginalResult out;
  out.rows = rows;
  out.cols = cols;
  out.log_z = logsumexp(fwd[cols - 1]);
  out.site.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  if (rows > 1) out.down_agree.assign(static_cast<std::size_t>(rows - 1) * cols, 0.0);
  if (cols > 1) out.right_agree.assign(static_cast<std::size_t>(rows) * (cols - 1), 0.0);

  std::vector<double> post(states);
  for (int c = 0; c < cols; ++c) {
    for (std::size_t s = 0; s < states; ++s) post[s] = fwd[c][s] + bwd[c][s];
    for (int r = 0; r < rows; ++r) {
      double acc = kNegInf;
      for (std::size_t s = 0; s < states; ++s)
        if ((s >> r) & 1) acc = logaddexp(acc, post[s]);
      out.site[static_cast<std::size_t>(r) * cols + c] = std::exp(acc - out.log_z);
    }
    for (int r = 0; r + 1 < rows; ++r) {
      double acc = kNegInf;
      for (std::size_t s = 0; s < states; ++s)
        if (((s >> r) & 1) == ((s >> (r + 1)) & 1)) acc = logaddexp(acc, post[s]);
      out.down_agree[static_cast<std::size_t>(r) * cols + c] = std::exp(acc - out.log_z);
    }
  }

  // Boundary agreement per row: mask the forward message on the source bit,
  // push it through the transfer, then read off the matching target bit.
  std::vector<double> g(states);
  for (int c = 0; c + 1 < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      double agree = 0.0;
      for (int bit = 0; bit <= 1; ++bit) {
        for (std::size_t s = 0; s < states; ++s)
          g[s] = (((s >> r) & 1) == static_cast<unsigned>(bit)) ? fwd[c][s] : kNegInf;
        fold_transfer_sum(g, rows, wp);
        double acc = kNegInf;
        for (std::size_t s = 0; s < states; ++s) {
          if (((s >> r) & 1) != static_cast<unsigned>(bit)) continue;
          acc = logaddexp(acc, g[s] + a[c + 1][s] + bwd[c + 1][s]);
        }
        agree += std::exp(acc - out.log_z);
      }
      out.right_agree[static_cast<std::size_t>(r) * (cols - 1) + c] = agree;
    }
  }
  return out;
}

LabelGrid map_labels(const CrfModel& model, const FeatureGrid& features, InferMode mode,
                     int max_rows) {
  check_model(model, features);
  if (mode == InferMode::exact) return map_exact(model, features, max_rows);
  return map_icm(model, features);
}

Gradient cll_gradient(const CrfModel& model, const FeatureGrid& features,
                      const LabelGrid& gold, double l2, int max_rows) {
  check_labels(features, gold);
  const MarginalResult m = marginals(model, features, max_rows);

  Gradient g;
  g.values.assign(static_cast<std::size_t>(features.dim()) + 1, 0.0);
  for (int r = 0; r < features.rows(); ++r) {
    for (int c = 0; c < features.cols(); ++c) {
      const double resid = static_cast<double>(gold.at(r, c)) - m.site_at(r, c);
      const auto phi = features.site(r, c);
      for (int j = 0; j < features.dim(); ++j) g.values[j] += phi[j] * resid;
    }
  }
  g.values.back() = count_gold_agreements(gold) - m.expected_agreement();
  g.objective = score(model, features, gold) - m.log_z;
  apply_l2(g, model, l2);
  return g;
}

namespace {

// Shared pseudolikelihood pass; grad may be null for objective-only callers.
double pl_pass(const CrfModel& model, const FeatureGrid& features, const LabelGrid& gold,
               Gradient* grad) {
  check_model(model, features);
  check_labels(features, gold);
  const int rows = features.rows();
  const int cols = features.cols();
  const auto u = unary_field(model, features);
  const double wp = model.pairwise_weight;

  double obj = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int c1 = 0, c0 = 0;
      const int dr[4] = {-1, 1, 0, 0};
      const int dc[4] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        const int nr = r + dr[k];
        const int nc = c + dc[k];
        if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
        if (gold.at(nr, nc)) ++c1; else ++c0;
      }
      const double s1 = u[static_cast<std::size_t>(r) * cols + c] + wp * c1;
      const double s0 = wp * c0;
      const double lse = logaddexp(s0, s1);
      const int y = gold.at(r, c);
      obj += (y ? s1 : s0) - lse;
      if (grad) {
        const double p1 = std::exp(s1 - lse);
        const double resid = static_cast<double>(y) - p1;
        const auto phi = features.site(r, c);
        for (int j = 0; j < features.dim(); ++j) grad->values[j] += phi[j] * resid;
        grad->values.back() += (y ? c1 : c0) - (p1 * c1 + (1.0 - p1) * c0);
      }
    }
  }
  return obj;
}

}  // namespace

Gradient pl_gradient(const CrfModel& model, const FeatureGrid& features,
                     const LabelGrid& gold, double l2) {
  Gradient g;
  g.values.assign(static_cast<std::size_t>(features.dim()) + 1, 0.0);
  g.objective = pl_pass(model, features, gold, &g);
  apply_l2(g, model, l2);
  return g;
}

double pl_objective(const CrfModel& model, const FeatureGrid& features, const LabelGrid& gold) {
  return pl_pass(model, features, gold, nullptr);
}

TrainResult sgd_train(const CrfModel& init, const std::vector<TrainSample>& data,
                      const TrainConfig& cfg) {
  validate(cfg);
  if (data.empty()) throw DataError("no training samples");
  for (const auto& sample : data) {
    if (sample.features.dim() != init.feature_dim())
      throw ModelError("inconsistent feature dimensions in the training set");
    if (cfg.mode == TrainMode::exact_dp && sample.features.rows() > cfg.max_exact_height)
      throw DataError("training grid has " + std::to_string(sample.features.rows()) +
                      " rows; exact-dp mode is capped at " +
                      std::to_string(cfg.max_exact_height) + " (use pseudolikelihood)");
  }

  TrainResult out{init, {}};
  out.epoch_objective.reserve(cfg.epochs);

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    // Fisher-Yates with raw engine draws: the permutation depends only on
    // the seed, not on the standard library's shuffle implementation.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = rng() % i;
      std::swap(order[i - 1], order[j]);
    }

    double obj_sum = 0.0;
    for (std::size_t idx : order) {
      const auto& sample = data[idx];
      const Gradient g = cfg.mode == TrainMode::exact_dp
                             ? cll_gradient(out.model, sample.features, sample.gold, cfg.l2,
                                            cfg.max_exact_height)
                             : pl_gradient(out.model, sample.features, sample.gold, cfg.l2);
      obj_sum += g.objective;
      for (int j = 0; j < out.model.feature_dim(); ++j)
        out.model.unary_weights[j] += cfg.alpha * g.values[j];
      out.model.pairwise_weight += cfg.alpha * g.values.back();

      bool finite = std::isfinite(out.model.pairwise_weight);
      for (double w : out.model.unary_weights) finite = finite && std::isfinite(w);
      if (!finite)
        throw NumericError("training diverged at epoch " + std::to_string(epoch) +
                           " (learning rate " + std::to_string(cfg.alpha) + ")");
    }

    const double epoch_obj = obj_sum / static_cast<double>(data.size());
    if (!std::isfinite(epoch_obj))
      throw NumericError("training diverged at epoch " + std::to_string(epoch) +
                         " (learning rate " + std::to_string(cfg.alpha) + ")");
    out.epoch_objective.push_back(epoch_obj);
  }
  return out;
}

}  // namespace saldet
