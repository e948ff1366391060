#include "saldet/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>

#include "saldet/error.hpp"
#include "saldet/image_io.hpp"

namespace saldet {

namespace fs = std::filesystem;

namespace {

LbpSummary particle_lbp(const ColorImage& img, const GrayImage& gray, const PixelRect& block,
                        const PipelineConfig& cfg) {
  if (cfg.lbp_mode == LbpMode::color)
    return color_lbp_block_summary(img, block, ColorLbpParams{cfg.lbp, cfg.color_normal});
  return lbp_block_summary(gray, block, cfg.lbp);
}

int template_count(const PipelineConfig& cfg) {
  return static_cast<int>(cfg.shf.templates.size());
}

void check_model_shapes(const ModelFile& model) {
  const int k = template_count(model.config);
  if (static_cast<int>(model.average_shf.model.per_template.size()) != k ||
      static_cast<int>(model.normalization.mu.size()) != k ||
      static_cast<int>(model.normalization.sigma.size()) != k ||
      model.crf.feature_dim() != k + 1)
    throw ModelError("model component shapes do not match its template count");
}

// Exact decoding whenever the grid fits under the height cap, ICM otherwise.
LabelGrid decode_map(const CrfModel& crf, const FeatureGrid& features, int max_rows) {
  const InferMode mode = features.rows() <= max_rows ? InferMode::exact : InferMode::icm;
  return map_labels(crf, features, mode, max_rows);
}

GtMask crop_mask(const GtMask& mask, int width, int height) {
  if (mask.width() == width && mask.height() == height) return mask;
  GtMask out(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) out.set(x, y, mask.at(x, y));
  return out;
}

}  // namespace

std::vector<ParticleData> extract_particles(const ColorImage& img, const ParticleGrid& grid,
                                            const PipelineConfig& cfg) {
  const GrayImage gray = to_grayscale(img);
  std::vector<ParticleData> out;
  out.reserve(static_cast<std::size_t>(grid.count()));
  for (int row = 0; row < grid.rows(); ++row) {
    for (int col = 0; col < grid.cols(); ++col) {
      const PixelRect block = grid.particle(row, col);
      out.push_back({particle_lbp(img, gray, block, cfg),
                     spatial_histogram(img, block, cfg.shf)});
    }
  }
  return out;
}

FeatureGrid build_feature_grid(const std::vector<ParticleData>& particles,
                               const ParticleGrid& grid, const AverageShf& avg,
                               const IntegrationParams& norm, const PipelineConfig& cfg) {
  if (particles.size() != static_cast<std::size_t>(grid.count()))
    throw DataError("particle data does not match the grid");
  const int dim = template_count(cfg) + 1;
  FeatureGrid features(grid.cols(), grid.rows(), dim);
  for (int row = 0; row < grid.rows(); ++row) {
    for (int col = 0; col < grid.cols(); ++col) {
      const auto& p = particles[static_cast<std::size_t>(row) * grid.cols() + col];
      const auto f = shf_distance(p.sh, avg, cfg.shf_distance);
      const auto integrated = integrate_features(p.lbp, f, norm);
      auto site = features.site(row, col);
      for (int j = 0; j < dim; ++j) site[j] = integrated[j];
    }
  }
  return features;
}

GtMask paint_labels(const LabelGrid& labels, int block_size) {
  GtMask mask(labels.cols() * block_size, labels.rows() * block_size);
  for (int row = 0; row < labels.rows(); ++row)
    for (int col = 0; col < labels.cols(); ++col) {
      if (!labels.at(row, col)) continue;
      for (int y = row * block_size; y < (row + 1) * block_size; ++y)
        for (int x = col * block_size; x < (col + 1) * block_size; ++x) mask.set(x, y, 1);
    }
  return mask;
}

TrainOutput run_train(const PipelineConfig& cfg, const fs::path& data_root, std::ostream& log) {
  validate(cfg);
  const auto pairs = list_dataset(data_root);
  log << "training on " << pairs.size() << " image/mask pair(s) from " << data_root.string()
      << "\n";

  struct ImageData {
    ParticleGrid grid;
    LabelGrid labels;
    std::vector<ParticleData> particles;
  };
  std::vector<ImageData> images;
  images.reserve(pairs.size());

  std::vector<SpatialHistogram> salient_histograms;
  for (const auto& pair : pairs) {
    const ColorImage img = load_image(pair.image);
    const GtMask mask = load_mask(pair.mask);
    if (mask.width() != img.width() || mask.height() != img.height())
      throw DataError("mask dimensions differ from image for '" + pair.stem + "'");
    ParticleGrid grid = partition_grid(img.width(), img.height(), cfg.block_size);
    LabelGrid labels = label_particles(grid, mask, cfg.gt_threshold);
    auto particles = extract_particles(img, grid, cfg);
    for (int i = 0; i < grid.count(); ++i)
      if (labels.labels()[static_cast<std::size_t>(i)])
        salient_histograms.push_back(particles[static_cast<std::size_t>(i)].sh);
    images.push_back({grid, std::move(labels), std::move(particles)});
  }

  if (salient_histograms.empty())
    throw DataError("no salient training samples: every mask is background at the particle level");
  const AverageShf avg = average_histogram(salient_histograms);
  log << "average histogram fitted from " << avg.sample_count << " salient particle(s)\n";

  std::vector<std::vector<double>> products;
  for (const auto& image : images)
    for (const auto& p : image.particles)
      products.push_back(raw_product(p.lbp, shf_distance(p.sh, avg, cfg.shf_distance)));
  const IntegrationParams norm = fit_normalization(products);

  std::vector<TrainSample> samples;
  samples.reserve(images.size());
  for (const auto& image : images)
    samples.push_back(
        {build_feature_grid(image.particles, image.grid, avg, norm, cfg), image.labels});

  CrfModel init;
  init.unary_weights.assign(static_cast<std::size_t>(template_count(cfg)) + 1, 0.0);

  TrainResult trained = sgd_train(init, samples, cfg.train);
  for (std::size_t e = 0; e < trained.epoch_objective.size(); ++e)
    log << "epoch " << (e + 1) << " objective " << std::setprecision(12)
        << trained.epoch_objective[e] << "\n";

  // Particle-level training metrics from MAP decoding.
  Confusion pooled;
  for (const auto& sample : samples) {
    const LabelGrid decoded =
        decode_map(trained.model, sample.features, cfg.train.max_exact_height);
    for (int r = 0; r < decoded.rows(); ++r)
      for (int c = 0; c < decoded.cols(); ++c) {
        const bool pred = decoded.at(r, c);
        const bool gold = sample.gold.at(r, c);
        if (gold) { if (pred) ++pooled.tp; else ++pooled.fn; }
        else      { if (pred) ++pooled.fp; else ++pooled.tn; }
      }
  }
  const Prf train_scores = prf(pooled, cfg.beta_squared);
  log << "training F-measure (particle-level, beta2=" << cfg.beta_squared
      << "): " << train_scores.f_measure << " (precision " << train_scores.precision
      << ", recall " << train_scores.recall << ")\n";

  TrainOutput out{ModelFile{kModelSchemaVersion, cfg, avg, norm, trained.model},
                  trained.epoch_objective, train_scores, static_cast<int>(pairs.size()),
                  static_cast<int>(salient_histograms.size())};
  return out;
}

void run_predict(const ModelFile& model, const fs::path& image_path, const fs::path& mask_out,
                 const std::optional<fs::path>& soft_out) {
  validate(model.config);
  check_model_shapes(model);
  const ColorImage img = load_image(image_path);
  const ParticleGrid grid = partition_grid(img.width(), img.height(), model.config.block_size);
  const auto particles = extract_particles(img, grid, model.config);
  const FeatureGrid features =
      build_feature_grid(particles, grid, model.average_shf, model.normalization, model.config);

  const LabelGrid labels =
      decode_map(model.crf, features, model.config.train.max_exact_height);
  save_mask_png(paint_labels(labels, model.config.block_size), mask_out);

  if (soft_out) {
    const MarginalResult m =
        marginals(model.crf, features, model.config.train.max_exact_height);
    const int block = model.config.block_size;
    std::vector<std::uint8_t> soft(static_cast<std::size_t>(grid.covered_width()) *
                                   grid.covered_height());
    for (int row = 0; row < grid.rows(); ++row)
      for (int col = 0; col < grid.cols(); ++col) {
        const auto value =
            static_cast<std::uint8_t>(std::lround(255.0 * m.site_at(row, col)));
        for (int y = row * block; y < (row + 1) * block; ++y)
          for (int x = col * block; x < (col + 1) * block; ++x)
            soft[static_cast<std::size_t>(y) * grid.covered_width() + x] = value;
      }
    save_gray_png(grid.covered_width(), grid.covered_height(), soft, *soft_out);
  }
}

EvalOutput run_eval(const fs::path& pred_dir, const fs::path& gt_dir, double beta_squared) {
  EvalOutput out;
  const auto pairs = pair_directories(pred_dir, gt_dir, out.unmatched);
  if (pairs.empty())
    throw DatasetError("no stem-matched prediction/ground-truth pairs between " +
                       pred_dir.string() + " and " + gt_dir.string());

  std::vector<std::pair<std::string, Confusion>> per_image;
  per_image.reserve(pairs.size());
  for (const auto& pair : pairs) {
    const GtMask pred = load_mask(pair.image);
    const GtMask gt = load_mask(pair.mask);
    if (pred.width() > gt.width() || pred.height() > gt.height())
      throw DataError("prediction larger than ground truth for '" + pair.stem + "'");
    per_image.emplace_back(pair.stem,
                           confusion(pred, crop_mask(gt, pred.width(), pred.height())));
  }
  out.report = aggregate(per_image, beta_squared);
  return out;
}

void write_report_text(const MetricsReport& report, std::ostream& out) {
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(6);
  out << "name precision recall f_measure\n";
  for (const auto& image : report.per_image)
    out << image.name << " " << image.scores.precision << " " << image.scores.recall << " "
        << image.scores.f_measure << "\n";
  out << "macro " << report.macro.precision << " " << report.macro.recall << " "
      << report.macro.f_measure << "\n";
  out << "micro " << report.micro.precision << " " << report.micro.recall << " "
      << report.micro.f_measure << "\n";
  out << "beta2 " << report.beta_squared << "\n";
  out.flags(flags);
}

void write_report_json(const MetricsReport& report, const fs::path& path) {
  nlohmann::json images = nlohmann::json::array();
  for (const auto& image : report.per_image) {
    images.push_back({{"name", image.name},
                      {"tp", image.counts.tp},
                      {"fp", image.counts.fp},
                      {"tn", image.counts.tn},
                      {"fn", image.counts.fn},
                      {"precision", image.scores.precision},
                      {"recall", image.scores.recall},
                      {"f_measure", image.scores.f_measure}});
  }
  const nlohmann::json j{
      {"beta_squared", report.beta_squared},
      {"per_image", images},
      {"macro",
       {{"precision", report.macro.precision},
        {"recall", report.macro.recall},
        {"f_measure", report.macro.f_measure}}},
      {"micro",
       {{"precision", report.micro.precision},
        {"recall", report.micro.recall},
        {"f_measure", report.micro.f_measure}}},
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(IoError::Kind::write_failed, "cannot write report: " + path.string());
  out << j.dump(2) << "\n";
}

void run_features(const PipelineConfig& cfg, const fs::path& image_path,
                  const fs::path& out_path, const ModelFile* model) {
  validate(cfg);
  if (model) check_model_shapes(*model);
  const ColorImage img = load_image(image_path);
  const ParticleGrid grid = partition_grid(img.width(), img.height(), cfg.block_size);
  const auto particles = extract_particles(img, grid, cfg);

  std::ofstream out(out_path, std::ios::binary);
  if (!out)
    throw IoError(IoError::Kind::write_failed, "cannot write feature dump: " + out_path.string());

  for (int row = 0; row < grid.rows(); ++row) {
    for (int col = 0; col < grid.cols(); ++col) {
      const auto& p = particles[static_cast<std::size_t>(row) * grid.cols() + col];
      const PixelRect rect = grid.particle(row, col);
      nlohmann::json record{
          {"row", row},
          {"col", col},
          {"x", rect.x},
          {"y", rect.y},
          {"block_size", rect.w},
          {"lbp_mean", p.lbp.mean_code},
          {"lbp_histogram", p.lbp.histogram},
          {"shf", p.sh.per_template},
      };
      if (model) {
        const auto f = shf_distance(p.sh, model->average_shf, cfg.shf_distance);
        record["distance"] = f;
        record["raw_product"] = raw_product(p.lbp, f);
        record["integrated"] = integrate_features(p.lbp, f, model->normalization);
      }
      out << record.dump() << "\n";
    }
  }
  if (!out)
    throw IoError(IoError::Kind::write_failed, "failed writing feature dump: " + out_path.string());
}

}  // namespace saldet
