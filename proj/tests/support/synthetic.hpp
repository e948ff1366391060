#pragma once

#include <cstdint>
#include <filesystem>

namespace testsupport {

// Dark noisy background with one bright noisy rectangle, block-aligned so
// the pixel ground truth coincides with the particle labeling.
struct SyntheticSpec {
  int width = 128;
  int height = 96;
  int block = 16;
  int min_blocks_w = 2;
  int max_blocks_w = 5;
  int min_blocks_h = 2;
  int max_blocks_h = 4;
  double bg_mean = 60.0;
  double bg_dev = 10.0;
  double fg_mean = 180.0;
  double fg_dev = 10.0;
};

// Writes <index>.png pairs into img_dir and gt_dir for indices
// [first_index, first_index + count). Image `i` depends only on (seed, i).
void generate_synthetic(const std::filesystem::path& img_dir,
                        const std::filesystem::path& gt_dir, int first_index, int count,
                        std::uint64_t seed, const SyntheticSpec& spec = {});

}  // namespace testsupport
