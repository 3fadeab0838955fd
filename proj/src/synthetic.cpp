#include "cornerforge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cornerforge/error.hpp"

namespace cornerforge {
namespace {

std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

struct Shape {
  enum class Kind { polygon, ellipse } kind;
  std::vector<Point2d> vertices;  // polygon, in order
  Point2d center;                 // ellipse
  double rx = 0, ry = 0, angle = 0;
  double intensity = 0;
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;

  bool contains(double x, double y) const {
    if (kind == Kind::ellipse) {
      const double c = std::cos(angle), s = std::sin(angle);
      const double u = ((x - center.x) * c + (y - center.y) * s) / rx;
      const double v = (-(x - center.x) * s + (y - center.y) * c) / ry;
      return u * u + v * v <= 1.0;
    }
    bool inside = false;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2d& a = vertices[i];
      const Point2d& b = vertices[j];
      if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x)
        inside = !inside;
    }
    return inside;
  }
};

Shape random_shape(std::mt19937_64& rng, int width, int height, const SceneOptions& opt) {
  std::uniform_real_distribution<double> ux(-opt.max_radius, width + opt.max_radius);
  std::uniform_real_distribution<double> uy(-opt.max_radius, height + opt.max_radius);
  std::uniform_real_distribution<double> ur(opt.min_radius, opt.max_radius);
  std::uniform_real_distribution<double> uangle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> uint(0.0, 255.0);
  std::uniform_int_distribution<int> ukind(0, 2);
  std::uniform_int_distribution<int> usides(3, 7);

  Shape shape;
  const Point2d c{ux(rng), uy(rng)};
  const int kind = ukind(rng);
  if (kind == 2) {
    shape.kind = Shape::Kind::ellipse;
    shape.center = c;
    shape.rx = ur(rng);
    shape.ry = ur(rng);
    shape.angle = uangle(rng);
  } else {
    shape.kind = Shape::Kind::polygon;
    if (kind == 0) {
      // rotated rectangle
      const double hw = ur(rng), hh = ur(rng), a = uangle(rng);
      const double ca = std::cos(a), sa = std::sin(a);
      for (auto [sx, sy] : {std::pair{-1, -1}, {1, -1}, {1, 1}, {-1, 1}})
        shape.vertices.push_back({c.x + sx * hw * ca - sy * hh * sa,
                                  c.y + sx * hw * sa + sy * hh * ca});
    } else {
      // star-shaped polygon with sorted vertex angles
      const int sides = usides(rng);
      std::vector<double> angles(static_cast<std::size_t>(sides));
      for (double& a : angles) a = uangle(rng);
      std::ranges::sort(angles);
      for (double a : angles) {
        const double r = ur(rng);
        shape.vertices.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
      }
    }
  }
  shape.intensity = uint(rng);
  if (shape.kind == Shape::Kind::ellipse) {
    const double r = std::max(shape.rx, shape.ry);
    shape.min_x = c.x - r;
    shape.max_x = c.x + r;
    shape.min_y = c.y - r;
    shape.max_y = c.y + r;
  } else {
    shape.min_x = shape.max_x = shape.vertices.front().x;
    shape.min_y = shape.max_y = shape.vertices.front().y;
    for (const Point2d& v : shape.vertices) {
      shape.min_x = std::min(shape.min_x, v.x);
      shape.max_x = std::max(shape.max_x, v.x);
      shape.min_y = std::min(shape.min_y, v.y);
      shape.max_y = std::max(shape.max_y, v.y);
    }
  }
  return shape;
}

}  // namespace

GrayImage make_test_square(int size, int square, std::uint8_t fg, std::uint8_t bg) {
  if (square < 0 || square >= size)
    throw PreconditionError("square must be smaller than the image");
  GrayImage img(size, size, bg);
  const int start = (size - square) / 2;
  for (int y = start; y < start + square; ++y)
    for (int x = start; x < start + square; ++x) img(x, y) = fg;
  return img;
}

GrayImage add_gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw PreconditionError("noise sigma must be non-negative");
  if (sigma == 0.0) return img;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  GrayImage out = img;
  for (int y = 0; y < out.height(); ++y) {
    std::uint8_t* r = out.row(y);
    for (int x = 0; x < out.width(); ++x) r[x] = clamp_byte(r[x] + noise(rng));
  }
  return out;
}

GrayImage make_synthetic_scene(int width, int height, std::uint64_t seed,
                               const SceneOptions& options) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // Smooth background: low-frequency shading between two grey levels.
  const double g0 = 60 + 130 * u01(rng);
  const double gx = (u01(rng) - 0.5) * 80.0 / width;
  const double gy = (u01(rng) - 0.5) * 80.0 / height;
  const double fx = 2 * std::numbers::pi * (0.5 + 1.5 * u01(rng)) / width;
  const double fy = 2 * std::numbers::pi * (0.5 + 1.5 * u01(rng)) / height;
  const double amp = 10 + 20 * u01(rng);

  const int ss = std::max(1, options.supersample);
  const int sw = width * ss;
  std::vector<double> acc(static_cast<std::size_t>(width) * height * ss * ss);
  auto at = [&](int sx, int sy) -> double& {
    return acc[static_cast<std::size_t>(sy) * sw + sx];
  };
  for (int sy = 0; sy < height * ss; ++sy)
    for (int sx = 0; sx < sw; ++sx) {
      const double x = (sx + 0.5) / ss - 0.5, y = (sy + 0.5) / ss - 0.5;
      at(sx, sy) = g0 + gx * x + gy * y + amp * std::sin(fx * x) * std::cos(fy * y);
    }

  const int shape_count =
      static_cast<int>(std::lround(options.shape_density * width * height / 1000.0));
  for (int i = 0; i < shape_count; ++i) {
    const Shape shape = random_shape(rng, width, height, options);
    const int x0 = std::max(0, static_cast<int>(std::floor((shape.min_x + 0.5) * ss)));
    const int x1 = std::min(sw - 1, static_cast<int>(std::ceil((shape.max_x + 0.5) * ss)));
    const int y0 = std::max(0, static_cast<int>(std::floor((shape.min_y + 0.5) * ss)));
    const int y1 = std::min(height * ss - 1, static_cast<int>(std::ceil((shape.max_y + 0.5) * ss)));
    for (int sy = y0; sy <= y1; ++sy)
      for (int sx = x0; sx <= x1; ++sx) {
        const double x = (sx + 0.5) / ss - 0.5, y = (sy + 0.5) / ss - 0.5;
        if (shape.contains(x, y)) at(sx, sy) = shape.intensity;
      }
  }

  GrayImage img(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double sum = 0.0;
      for (int j = 0; j < ss; ++j)
        for (int i = 0; i < ss; ++i) sum += at(x * ss + i, y * ss + j);
      img(x, y) = clamp_byte(sum / (ss * ss));
    }
  return img;
}

double sample_bilinear(const GrayImage& img, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
  const int x0 = std::min(static_cast<int>(x), img.width() - 1);
  const int y0 = std::min(static_cast<int>(y), img.height() - 1);
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double ax = x - x0, ay = y - y0;
  const double top = img(x0, y0) * (1 - ax) + img(x1, y0) * ax;
  const double bottom = img(x0, y1) * (1 - ax) + img(x1, y1) * ax;
  return top * (1 - ay) + bottom * ay;
}

GrayImage warp_image(const GrayImage& src, const Homography& dst_to_src, int width, int height) {
  GrayImage out(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const auto p = dst_to_src.apply({static_cast<double>(x), static_cast<double>(y)});
      out(x, y) = p ? clamp_byte(sample_bilinear(src, p->x, p->y)) : 0;
    }
  return out;
}

}  // namespace cornerforge
