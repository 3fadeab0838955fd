#include "cornerforge/image.hpp"

#include <string>

#include "cornerforge/error.hpp"

namespace cornerforge {

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1)
    throw PreconditionError("image dimensions must be positive, got " +
                            std::to_string(width) + "x" + std::to_string(height));
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1)
    throw PreconditionError("image dimensions must be positive, got " +
                            std::to_string(width) + "x" + std::to_string(height));
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw PreconditionError("pixel buffer size does not match image dimensions");
}

GrayImage rotate90(const GrayImage& img) {
  GrayImage out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const Point q = rotate90_point({x, y}, img.height());
      out(q.x, q.y) = img(x, y);
    }
  return out;
}

GrayImage flip_horizontal(const GrayImage& img) {
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out(img.width() - 1 - x, y) = img(x, y);
  return out;
}

GrayImage flip_vertical(const GrayImage& img) {
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out(x, img.height() - 1 - y) = img(x, y);
  return out;
}

GrayImage transpose(const GrayImage& img) {
  GrayImage out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out(y, x) = img(x, y);
  return out;
}

GrayImage invert(const GrayImage& img) {
  GrayImage out = img;
  for (int y = 0; y < out.height(); ++y) {
    std::uint8_t* r = out.row(y);
    for (int x = 0; x < out.width(); ++x) r[x] = static_cast<std::uint8_t>(255 - r[x]);
  }
  return out;
}

}  // namespace cornerforge
