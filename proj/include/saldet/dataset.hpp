#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace saldet {

struct DatasetPair {
  std::string stem;
  std::filesystem::path image;
  std::filesystem::path mask;
};

/// Lists image/mask pairs under a dataset root. A manifest file
/// (root/manifest.tsv, one "image_path<TAB>mask_path" per line, paths
/// relative to the root or absolute) takes precedence; otherwise img/ and
/// gt/ subdirectories are paired by file stem. Every image must have a mask.
std::vector<DatasetPair> list_dataset(const std::filesystem::path& root);

/// Raster files the loaders accept (.png/.jpg/.jpeg, case-insensitive).
bool has_raster_extension(const std::filesystem::path& p);

/// Stem-matched raster files of two flat directories, sorted by stem.
/// Stems present in only one directory land in `unmatched`.
std::vector<DatasetPair> pair_directories(const std::filesystem::path& pred_dir,
                                          const std::filesystem::path& gt_dir,
                                          std::vector<std::string>& unmatched);

}  // namespace saldet
