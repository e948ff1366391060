#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "saldet/crf.hpp"
#include "saldet/lbp.hpp"
#include "saldet/shf.hpp"

namespace saldet {

enum class LbpMode { gray, color };

/// Every tunable of the feature pipeline and the trainer. Loaded from a flat
/// key = value text file with dotted section keys; unknown keys are rejected.
struct PipelineConfig {
  int block_size = 16;
  double gt_threshold = 0.5;

  LbpParams lbp;
  LbpMode lbp_mode = LbpMode::gray;
  std::array<double, 3> color_normal = {0.5773502691896258, 0.5773502691896258,
                                        0.5773502691896258};  // (1,1,1)/sqrt(3)

  ShfParams shf = default_shf_params();
  HistDistance shf_distance = HistDistance::l1;

  TrainConfig train;

  double beta_squared = 0.3;
};

/// Validates every field against the owning module's invariants.
void validate(const PipelineConfig& cfg);

PipelineConfig parse_config_text(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// The color normal is accepted as any nonzero triple and normalized here.
std::array<double, 3> normalize_color_normal(const std::array<double, 3>& n);

}  // namespace saldet
