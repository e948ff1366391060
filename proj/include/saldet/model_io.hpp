#pragma once

#include <filesystem>
#include <string>

#include "saldet/config.hpp"
#include "saldet/crf.hpp"
#include "saldet/integrate.hpp"
#include "saldet/shf.hpp"

namespace saldet {

inline constexpr int kModelSchemaVersion = 1;

/// Everything needed to reproduce prediction: the configuration snapshot,
/// the fitted average histogram model, the normalization constants, and the
/// CRF weights. Serialized as a single JSON document whose save -> load ->
/// save round trip is byte-identical.
struct ModelFile {
  int schema_version = kModelSchemaVersion;
  PipelineConfig config;
  AverageShf average_shf;
  IntegrationParams normalization;
  CrfModel crf;
};

std::string model_to_json_text(const ModelFile& model);
ModelFile model_from_json_text(const std::string& text);

void save_model(const ModelFile& model, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace saldet
