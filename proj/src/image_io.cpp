#include "saldet/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "saldet/error.hpp"

namespace saldet {

namespace fs = std::filesystem;

namespace {

cv::Mat read_raster(const fs::path& path, int flags) {
  std::error_code ec;
  if (!fs::exists(path, ec) || ec)
    throw IoError(IoError::Kind::unreadable, "cannot read file: " + path.string());
  cv::Mat m = cv::imread(path.string(), flags);
  if (m.empty())
    throw IoError(IoError::Kind::decode_failed, "failed to decode raster file: " + path.string());
  if (m.cols < 1 || m.rows < 1)
    throw IoError(IoError::Kind::empty_image, "zero-size image: " + path.string());
  return m;
}

}  // namespace

ColorImage load_image(const fs::path& path) {
  cv::Mat m = read_raster(path, cv::IMREAD_COLOR);  // 8UC3 BGR, gray replicated
  ColorImage img(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    const cv::Vec3b* row = m.ptr<cv::Vec3b>(y);
    for (int x = 0; x < m.cols; ++x) {
      img.at(x, y) = Rgb{row[x][2], row[x][1], row[x][0]};
    }
  }
  return img;
}

GtMask load_mask(const fs::path& path) {
  cv::Mat m = read_raster(path, cv::IMREAD_GRAYSCALE);
  GtMask mask(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      mask.set(x, y, row[x] >= 128 ? 1 : 0);
    }
  }
  return mask;
}

void save_mask_png(const GtMask& mask, const fs::path& path) {
  cv::Mat m(mask.height(), mask.width(), CV_8UC1);
  for (int y = 0; y < mask.height(); ++y) {
    std::uint8_t* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < mask.width(); ++x) {
      row[x] = mask.at(x, y) ? 255 : 0;
    }
  }
  if (!cv::imwrite(path.string(), m))
    throw IoError(IoError::Kind::write_failed, "failed to write PNG: " + path.string());
}

void save_gray_png(int width, int height, const std::vector<std::uint8_t>& values,
                   const fs::path& path) {
  if (width < 1 || height < 1 ||
      values.size() != static_cast<std::size_t>(width) * height)
    throw DataError("gray PNG buffer does not match its dimensions");
  cv::Mat m(height, width, CV_8UC1);
  for (int y = 0; y < height; ++y) {
    std::uint8_t* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < width; ++x) {
      row[x] = values[static_cast<std::size_t>(y) * width + x];
    }
  }
  if (!cv::imwrite(path.string(), m))
    throw IoError(IoError::Kind::write_failed, "failed to write PNG: " + path.string());
}

void save_color_png(const ColorImage& img, const fs::path& path) {
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    cv::Vec3b* row = m.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width(); ++x) {
      const Rgb& p = img.at(x, y);
      row[x] = cv::Vec3b(p.b, p.g, p.r);
    }
  }
  if (!cv::imwrite(path.string(), m))
    throw IoError(IoError::Kind::write_failed, "failed to write PNG: " + path.string());
}

}  // namespace saldet
