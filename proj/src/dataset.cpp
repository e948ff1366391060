#include "saldet/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "saldet/error.hpp"

namespace saldet {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::map<std::string, fs::path> scan_rasters(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DatasetError("not a directory: " + dir.string());
  std::map<std::string, fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || !has_raster_extension(entry.path())) continue;
    const std::string stem = entry.path().stem().string();
    if (!out.emplace(stem, entry.path()).second)
      throw DatasetError("duplicate stem '" + stem + "' in " + dir.string());
  }
  return out;
}

std::vector<DatasetPair> read_manifest(const fs::path& manifest, const fs::path& root) {
  std::ifstream in(manifest);
  if (!in)
    throw IoError(IoError::Kind::unreadable, "cannot read manifest: " + manifest.string());
  std::vector<DatasetPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw DatasetError("manifest line " + std::to_string(line_no) +
                         ": expected image_path<TAB>mask_path");
    fs::path image = line.substr(0, tab);
    fs::path mask = line.substr(tab + 1);
    if (image.is_relative()) image = root / image;
    if (mask.is_relative()) mask = root / mask;
    out.push_back({image.stem().string(), image, mask});
  }
  if (out.empty()) throw DatasetError("manifest is empty: " + manifest.string());
  return out;
}

}  // namespace

bool has_raster_extension(const fs::path& p) {
  const std::string ext = lower(p.extension().string());
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<DatasetPair> list_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw DatasetError("dataset root is not a directory: " + root.string());

  const fs::path manifest = root / "manifest.tsv";
  if (fs::exists(manifest)) return read_manifest(manifest, root);

  const auto images = scan_rasters(root / "img");
  const auto masks = scan_rasters(root / "gt");

  std::vector<DatasetPair> out;
  out.reserve(images.size());
  for (const auto& [stem, image] : images) {
    const auto it = masks.find(stem);
    if (it == masks.end())
      throw DatasetError("image '" + stem + "' has no ground-truth mask in " +
                         (root / "gt").string());
    out.push_back({stem, image, it->second});
  }
  if (out.empty()) throw DatasetError("no image/mask pairs under " + root.string());
  return out;
}

std::vector<DatasetPair> pair_directories(const fs::path& pred_dir, const fs::path& gt_dir,
                                          std::vector<std::string>& unmatched) {
  const auto preds = scan_rasters(pred_dir);
  const auto gts = scan_rasters(gt_dir);

  std::vector<DatasetPair> out;
  for (const auto& [stem, pred] : preds) {
    const auto it = gts.find(stem);
    if (it == gts.end()) {
      unmatched.push_back(stem + " (prediction only)");
      continue;
    }
    out.push_back({stem, pred, it->second});
  }
  for (const auto& [stem, gt] : gts) {
    if (!preds.contains(stem)) unmatched.push_back(stem + " (ground truth only)");
  }
  return out;
}

}  // namespace saldet
