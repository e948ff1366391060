#include "saldet/grid.hpp"

#include <string>

namespace saldet {

ParticleGrid partition_grid(int width, int height, int block_size) {
  if (block_size < 2) throw DataError("block size must be at least 2");
  if (width < block_size || height < block_size)
    throw DataError("image " + std::to_string(width) + "x" + std::to_string(height) +
                    " holds less than one " + std::to_string(block_size) + "px block");
  return ParticleGrid(width / block_size, height / block_size, block_size);
}

LabelGrid label_particles(const ParticleGrid& grid, const GtMask& mask, double threshold) {
  if (threshold <= 0.0 || threshold > 1.0)
    throw DataError("label threshold must lie in (0, 1]");
  if (mask.width() < grid.covered_width() || mask.height() < grid.covered_height())
    throw DataError("mask smaller than the particle grid coverage");

  LabelGrid out(grid.cols(), grid.rows());
  const double area = static_cast<double>(grid.block_size()) * grid.block_size();
  for (int row = 0; row < grid.rows(); ++row) {
    for (int col = 0; col < grid.cols(); ++col) {
      const PixelRect r = grid.particle(row, col);
      long salient = 0;
      for (int y = r.y; y < r.y + r.h; ++y)
        for (int x = r.x; x < r.x + r.w; ++x)
          salient += mask.at(x, y);
      out.set(row, col, static_cast<double>(salient) / area >= threshold ? 1 : 0);
    }
  }
  return out;
}

}  // namespace saldet
