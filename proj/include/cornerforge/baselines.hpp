#pragma once

// Comparison detectors: Harris, Shi-Tomasi and a random scatter.

#include <cstdint>
#include <vector>

#include "cornerforge/detector.hpp"
#include "cornerforge/image.hpp"

namespace cornerforge {

/// Real-valued per-pixel map.
struct ScalarField {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}
  double operator()(int x, int y) const { return values[index(x, y)]; }
  double& operator()(int x, int y) { return values[index(x, y)]; }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  }
};

/// Gaussian-averaged gradient products Ix^2, IxIy, Iy^2.
struct StructureTensor {
  ScalarField xx, xy, yy;
  int width() const { return xx.width; }
  int height() const { return xx.height; }
};

inline constexpr double kDefaultBlurSigma = 2.5;
inline constexpr double kHarrisK = 0.04;

/// Central-difference gradients, products smoothed by a Gaussian of standard
/// deviation `sigma` truncated at 3 sigma. Borders replicate.
StructureTensor structure_tensor(const GrayImage& img, double sigma = kDefaultBlurSigma, int jobs = 1);

/// det(H) - k trace(H)^2.
ScalarField harris_response(const StructureTensor& tensor, double k = kHarrisK);
/// Smaller eigenvalue of H.
ScalarField shi_tomasi_response(const StructureTensor& tensor);

/// Local maxima of the positive part of `field` at least `margin` pixels
/// from the border, after 3x3 suppression.
std::vector<Keypoint> response_maxima(const ScalarField& field, int margin = 3);
/// response_maxima followed by top-n selection.
std::vector<Keypoint> detect_response(const ScalarField& field, std::size_t n, int margin = 3);

/// The first `n` points of a seeded random permutation of the interior
/// pixels, raster ordered, every score 1. Prefixes nest: the points for n
/// are among those for any larger n.
std::vector<Keypoint> detect_random(const GrayImage& img, std::size_t n, std::uint64_t seed,
                                    int margin = 3);
/// Same sequence as detect_random, in draw order, for any image size.
std::vector<Point> random_interior_points(int width, int height, std::size_t n, std::uint64_t seed,
                                          int margin = 3);

}  // namespace cornerforge
