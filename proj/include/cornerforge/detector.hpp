#pragma once

// Running a TernaryTree over images: classification, corner scores and
// non-maximal suppression.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cornerforge/error.hpp"
#include "cornerforge/image.hpp"
#include "cornerforge/offsets.hpp"
#include "cornerforge/ternary_tree.hpp"

namespace cornerforge {

/// A detected feature. For tree detectors the score is the largest
/// threshold at which the pixel still classifies as a corner (1..255);
/// response-based detectors store their response.
struct Keypoint {
  int x = 0;
  int y = 0;
  double score = 0.0;

  Point position() const { return {x, y}; }
  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

/// Thrown when a pixel has no score because it is not a corner at t = 1.
class NotACornerError : public Error {
 public:
  using Error::Error;
};

/// A tree bound to one image stride, with offsets pre-multiplied into byte
/// displacements. Optionally applies a grid symmetry to the offsets and/or
/// swaps the brighter and darker branches (intensity inversion).
class CompiledTree {
 public:
  CompiledTree(const TernaryTree& tree, std::ptrdiff_t stride, GridSymmetry symmetry = {},
               bool inverted = false);

  bool classify(const std::uint8_t* p, int threshold) const {
    return walk(root_, p, threshold) == kCornerLeaf;
  }

  /// Encoded walk result: kCornerLeaf, kNonCornerLeaf or a node index.
  static constexpr std::int32_t kNonCornerLeaf = -1;
  static constexpr std::int32_t kCornerLeaf = -2;

  std::int32_t walk(std::int32_t start, const std::uint8_t* p, int threshold) const {
    const int hi = *p + threshold, lo = *p - threshold;
    std::int32_t i = start;
    while (i >= 0) {
      const Node& n = nodes_[static_cast<std::size_t>(i)];
      const int v = p[n.offset];
      i = v >= hi ? n.child[2] : (v <= lo ? n.child[0] : n.child[1]);
    }
    return i;
  }

  std::int32_t root() const noexcept { return root_; }

  struct Node {
    std::ptrdiff_t offset;
    std::int32_t child[3];  // indexed by PixelState; negative = leaf code
  };
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<Node> nodes_;
  std::int32_t root_ = kNonCornerLeaf;
};

enum class DetectStrategy {
  /// Walk the full tree at every pixel.
  per_pixel,
  /// Evaluate the first two tests for a whole scanline, then walk only the
  /// pixels that were not already decided. Output-identical to per_pixel.
  batched,
};

struct DetectOptions {
  DetectStrategy strategy = DetectStrategy::batched;
  int jobs = 1;
};

/// A tree prepared for one image: classification, detection and scoring.
class TreeDetector {
 public:
  TreeDetector(const TernaryTree& tree, const GrayImage& img);

  int margin() const noexcept { return margin_; }
  bool classify(Point p, int threshold) const;
  std::vector<Point> detect(int threshold, const DetectOptions& options = {}) const;

  /// Binary search for the largest t in [1, 255] that classifies p as a
  /// corner, assuming classification is non-increasing in t.
  int score_bisect(Point p, int* evaluations = nullptr) const;
  /// Raise t by the smallest amount that changes some tested pixel's state
  /// until classification fails.
  int score_iterate(Point p, int* iterations = nullptr) const;

 private:
  const TernaryTree& tree_;
  const GrayImage& img_;
  CompiledTree compiled_;
  int margin_;
};

/// Walk `tree` at p with threshold t. p must be inside the tree's margin.
bool classify_pixel(const TernaryTree& tree, const GrayImage& img, Point p, int threshold);

/// Interior pixels classified as corners, raster order.
std::vector<Point> detect(const TernaryTree& tree, const GrayImage& img, int threshold,
                          const DetectOptions& options = {});

int corner_score_bisect(const TernaryTree& tree, const GrayImage& img, Point p);
int corner_score_iterate(const TernaryTree& tree, const GrayImage& img, Point p);

/// 3x3 suppression: p survives iff no 8-neighbour has a larger score and no
/// equal-score 8-neighbour precedes it in raster order. Output is raster
/// ordered. Positions must be distinct.
std::vector<Keypoint> nonmax_suppress(std::span<const Keypoint> points);

/// The highest-scoring points, cut only at a boundary between score
/// classes: returns the achievable count closest to n (the smaller one when
/// two are equally close), all points when n >= size. Raster ordered.
std::vector<Keypoint> top_n_by_score(std::span<const Keypoint> points, std::size_t n);

/// detect + bisection scores + non-maximal suppression.
std::vector<Keypoint> detect_keypoints(const TernaryTree& tree, const GrayImage& img, int threshold,
                                       const DetectOptions& options = {});

/// Sort keypoints into raster order.
void sort_raster(std::vector<Keypoint>& points);

/// One "x y score" line per keypoint.
std::string format_keypoints(std::span<const Keypoint> points);
/// Inverse of format_keypoints; blank and '#' lines are skipped. Throws
/// ParseError.
std::vector<Keypoint> parse_keypoints(const std::string& text);

}  // namespace cornerforge
