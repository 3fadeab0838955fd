#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cornerforge {

/// Integer pixel position, y increasing downward.
struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
  /// Raster order: row first, then column.
  friend auto operator<=>(const Point& a, const Point& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

/// 8-bit single channel raster, row-major, stride == width.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::ptrdiff_t stride() const noexcept { return width_; }
  bool empty() const noexcept { return data_.empty(); }

  std::uint8_t operator()(int x, int y) const { return data_[index(x, y)]; }
  std::uint8_t& operator()(int x, int y) { return data_[index(x, y)]; }

  const std::uint8_t* row(int y) const { return data_.data() + index(0, y); }
  std::uint8_t* row(int y) { return data_.data() + index(0, y); }
  const std::uint8_t* data() const noexcept { return data_.data(); }
  std::uint8_t* data() noexcept { return data_.data(); }

  std::span<const std::uint8_t> pixels() const noexcept { return data_; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  /// True when (x, y) is at least `margin` pixels from every border.
  bool is_interior(int x, int y, int margin) const noexcept {
    return x >= margin && y >= margin && x < width_ - margin && y < height_ - margin;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Whole-image symmetries used by the equivariance checks.

/// Rotate 90 degrees clockwise: (x, y) -> (h - 1 - y, x).
GrayImage rotate90(const GrayImage& img);
/// Mirror left-right: (x, y) -> (w - 1 - x, y).
GrayImage flip_horizontal(const GrayImage& img);
/// Mirror top-bottom: (x, y) -> (x, h - 1 - y).
GrayImage flip_vertical(const GrayImage& img);
GrayImage transpose(const GrayImage& img);
/// I -> 255 - I.
GrayImage invert(const GrayImage& img);

/// Where `rotate90` sends a pixel of an image with the given height.
inline Point rotate90_point(Point p, int height) { return {height - 1 - p.y, p.x}; }

}  // namespace cornerforge
