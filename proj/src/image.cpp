#include "saldet/image.hpp"

namespace saldet {

GrayImage to_grayscale(const ColorImage& img) {
  GrayImage out(img.width(), img.height());
  const auto& px = img.pixels();
  auto& in = out.intensities();
  for (std::size_t i = 0; i < px.size(); ++i) {
    in[i] = 0.299 * px[i].r + 0.587 * px[i].g + 0.114 * px[i].b;
  }
  return out;
}

}  // namespace saldet
