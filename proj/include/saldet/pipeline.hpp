#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "saldet/config.hpp"
#include "saldet/crf.hpp"
#include "saldet/dataset.hpp"
#include "saldet/metrics.hpp"
#include "saldet/model_io.hpp"

namespace saldet {

/// Per-particle raw features before integration.
struct ParticleData {
  LbpSummary lbp;
  SpatialHistogram sh;
};

std::vector<ParticleData> extract_particles(const ColorImage& img, const ParticleGrid& grid,
                                            const PipelineConfig& cfg);

/// Integrated feature vectors (K distances + bias) for every particle.
FeatureGrid build_feature_grid(const std::vector<ParticleData>& particles,
                               const ParticleGrid& grid, const AverageShf& avg,
                               const IntegrationParams& norm, const PipelineConfig& cfg);

/// Paints one particle label over each block of the cropped region.
GtMask paint_labels(const LabelGrid& labels, int block_size);

struct TrainOutput {
  ModelFile model;
  std::vector<double> epoch_objective;
  Prf train_scores;  // particle-level micro metrics of MAP decoding on the training set
  int image_count = 0;
  int salient_particles = 0;
};

/// Full training pipeline: fit the average salient histogram, fit the
/// normalization constants, build feature grids, run SGD, assemble the model.
/// Progress and per-epoch objectives go to `log`.
TrainOutput run_train(const PipelineConfig& cfg, const std::filesystem::path& data_root,
                      std::ostream& log);

/// Decodes MAP labels for one image with the model's config snapshot and
/// writes the painted binary mask; optionally writes site marginals as an
/// 8-bit grayscale map (exact inference required).
void run_predict(const ModelFile& model, const std::filesystem::path& image_path,
                 const std::filesystem::path& mask_out,
                 const std::optional<std::filesystem::path>& soft_out);

struct EvalOutput {
  MetricsReport report;
  std::vector<std::string> unmatched;
};

/// Scores stem-matched prediction/ground-truth mask pairs. Ground truth is
/// cropped to the prediction's size when the prediction covers less.
EvalOutput run_eval(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                    double beta_squared);

void write_report_text(const MetricsReport& report, std::ostream& out);
void write_report_json(const MetricsReport& report, const std::filesystem::path& path);

/// Dumps per-particle records (JSON lines): LBP summary and spatial
/// histograms always; distances, raw products and integrated features when a
/// model is supplied.
void run_features(const PipelineConfig& cfg, const std::filesystem::path& image_path,
                  const std::filesystem::path& out_path, const ModelFile* model);

}  // namespace saldet
