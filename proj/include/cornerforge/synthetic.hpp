#pragma once

#include <cstdint>

#include "cornerforge/geometry.hpp"
#include "cornerforge/image.hpp"

namespace cornerforge {

/// Derive an independent stream seed from a base seed and an index.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Centered axis-aligned `square` x `square` block of `fg` on a `bg` canvas.
GrayImage make_test_square(int size, int square, std::uint8_t fg, std::uint8_t bg);

/// clamp(round(I + N(0, sigma^2)), 0, 255) per pixel; a pure function of
/// (img, sigma, seed).
GrayImage add_gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed);

struct SceneOptions {
  /// Number of shapes per 1000 square pixels.
  double shape_density = 1.0;
  double min_radius = 4.0;
  double max_radius = 40.0;
  /// Supersampling factor per axis for anti-aliased edges.
  int supersample = 4;
};

/// Procedural piecewise-constant scene: a smooth shaded background overlaid
/// with random polygons, rotated rectangles and ellipses. Stands in for
/// natural test imagery.
GrayImage make_synthetic_scene(int width, int height, std::uint64_t seed,
                               const SceneOptions& options = {});

/// Bilinear sample at real coordinates; coordinates outside the image are
/// clamped to the border.
double sample_bilinear(const GrayImage& img, double x, double y);

/// out(p) = src(dst_to_src(p)) with bilinear interpolation.
GrayImage warp_image(const GrayImage& src, const Homography& dst_to_src, int width, int height);

}  // namespace cornerforge
