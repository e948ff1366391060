#pragma once

#include <cstdint>
#include <vector>

#include "saldet/grid.hpp"
#include "saldet/integrate.hpp"

namespace saldet {

/// Binary grid CRF over particle labels. The score of a labeling is
///
///   sum_j w_j * sum_sites phi_j(site) * [y_site = 1]
///   + w_pair * #{4-connected neighbor pairs with equal labels}
///
/// where phi is the site's integrated feature vector (bias included).
struct CrfModel {
  std::vector<double> unary_weights;  // one weight per feature component
  double pairwise_weight = 0.0;       // Potts agreement weight

  int feature_dim() const noexcept { return static_cast<int>(unary_weights.size()); }
};

enum class TrainMode { exact_dp, pseudolikelihood };

struct TrainConfig {
  double alpha = 0.01;  // learning rate, > 0 (0 allowed: no-op training)
  int epochs = 50;
  double l2 = 0.0;
  std::uint64_t seed = 1;
  TrainMode mode = TrainMode::exact_dp;
  int max_exact_height = 16;  // row cap for exact inference (2^rows column states)
};

void validate(const TrainConfig& cfg);

enum class InferMode { exact, icm };

/// Exact site marginals P(y = 1) plus agreement probabilities for every
/// 4-connected pair, split by direction.
struct MarginalResult {
  int rows = 0;
  int cols = 0;
  std::vector<double> site;         // rows*cols, row-major
  std::vector<double> down_agree;   // (rows-1)*cols: P(y(r,c) = y(r+1,c))
  std::vector<double> right_agree;  // rows*(cols-1): P(y(r,c) = y(r,c+1))
  double log_z = 0.0;

  double site_at(int r, int c) const { return site[static_cast<std::size_t>(r) * cols + c]; }
  double expected_agreement() const;  // sum over all pairs
};

/// MAP labels, marginals and log Z for one instance.
struct InferenceResult {
  LabelGrid map_labels;
  std::vector<double> site_marginals;  // row-major P(y = 1)
  double log_partition = 0.0;
};

/// sum_j w_j F_j(x, y) for one labeling.
double score(const CrfModel& model, const FeatureGrid& features, const LabelGrid& labels);

/// log Z by explicit enumeration of all 2^N labelings; refuses N > 20.
/// Oracle-grade reference for the DP.
double log_partition_brute(const CrfModel& model, const FeatureGrid& features);

/// Exact log Z by transfer over columns; the state is the joint labeling of
/// one column, so grids taller than max_rows are refused.
double log_partition_dp(const CrfModel& model, const FeatureGrid& features, int max_rows = 16);

/// Exact site and pair-agreement marginals from the column forward-backward
/// pass, log-domain throughout.
MarginalResult marginals(const CrfModel& model, const FeatureGrid& features, int max_rows = 16);

/// Exact mode: max-product column DP; ties resolve to the labeling that is
/// lexicographically smallest in row-major site order. ICM mode: greedy local
/// search from the unary sign initialization, row-major sweeps, at most 100.
LabelGrid map_labels(const CrfModel& model, const FeatureGrid& features,
                     InferMode mode = InferMode::exact, int max_rows = 16);

/// Gradient of an objective at the current weights (unary components first,
/// Potts weight last) plus the objective value itself.
struct Gradient {
  std::vector<double> values;
  double objective = 0.0;
};

/// d/dw of log p(gold | x) - (l2/2)||w||^2, exact expectations.
Gradient cll_gradient(const CrfModel& model, const FeatureGrid& features,
                      const LabelGrid& gold, double l2 = 0.0, int max_rows = 16);

/// d/dw of sum_sites log p(y_site | y_neighbors, x) - (l2/2)||w||^2.
Gradient pl_gradient(const CrfModel& model, const FeatureGrid& features,
                     const LabelGrid& gold, double l2 = 0.0);

/// Pseudolikelihood objective alone (used by tests and logging).
double pl_objective(const CrfModel& model, const FeatureGrid& features, const LabelGrid& gold);

struct TrainSample {
  FeatureGrid features;
  LabelGrid gold;
};

struct TrainResult {
  CrfModel model;
  std::vector<double> epoch_objective;  // mean per-sample objective, one per epoch
};

/// Per-sample stochastic gradient ascent with constant learning rate.
/// Sample order is reshuffled every epoch with a generator seeded from
/// cfg.seed; the run is bit-reproducible for a fixed seed.
TrainResult sgd_train(const CrfModel& init, const std::vector<TrainSample>& data,
                      const TrainConfig& cfg);

}  // namespace saldet
