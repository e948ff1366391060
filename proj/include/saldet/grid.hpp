#pragma once

#include <cstdint>
#include <vector>

#include "saldet/image.hpp"

namespace saldet {

struct PixelRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

/// Partition of an image into disjoint block_size x block_size particles,
/// anchored at (0, 0). Trailing pixels that do not fill a whole block are
/// cropped away.
class ParticleGrid {
 public:
  ParticleGrid(int cols, int rows, int block_size)
      : cols_(cols), rows_(rows), block_size_(block_size) {}

  int cols() const noexcept { return cols_; }
  int rows() const noexcept { return rows_; }
  int block_size() const noexcept { return block_size_; }
  int count() const noexcept { return cols_ * rows_; }

  int covered_width() const noexcept { return cols_ * block_size_; }
  int covered_height() const noexcept { return rows_ * block_size_; }

  PixelRect particle(int row, int col) const {
    return PixelRect{col * block_size_, row * block_size_, block_size_, block_size_};
  }

 private:
  int cols_;
  int rows_;
  int block_size_;
};

/// Binary labels over a particle grid (1 = salient), row-major.
class LabelGrid {
 public:
  LabelGrid(int cols, int rows)
      : cols_(cols), rows_(rows),
        labels_(static_cast<std::size_t>(cols) * rows, 0) {}

  int cols() const noexcept { return cols_; }
  int rows() const noexcept { return rows_; }

  std::uint8_t at(int row, int col) const { return labels_[index(row, col)]; }
  void set(int row, int col, std::uint8_t v) { labels_[index(row, col)] = v ? 1 : 0; }

  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }

  friend bool operator==(const LabelGrid&, const LabelGrid&) = default;

 private:
  std::size_t index(int row, int col) const {
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
      throw DataError("label grid coordinate out of range");
    return static_cast<std::size_t>(row) * cols_ + col;
  }

  int cols_;
  int rows_;
  std::vector<std::uint8_t> labels_;
};

/// Builds the particle grid covering the top-left
/// floor(w/b)*b x floor(h/b)*b region. Throws if the image holds less than
/// one block.
ParticleGrid partition_grid(int width, int height, int block_size);

/// Particle label = 1 iff (salient pixels in block) / (block area) >= threshold.
LabelGrid label_particles(const ParticleGrid& grid, const GtMask& mask, double threshold = 0.5);

}  // namespace saldet
