#pragma once

// Repeatability of feature detectors across views with known geometry.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cornerforge/detector.hpp"
#include "cornerforge/geometry.hpp"
#include "cornerforge/image.hpp"

namespace cornerforge {

/// Per-pixel correspondence from a source frame: target coordinates and a
/// visibility flag (false for occluded pixels).
class DenseMap {
 public:
  DenseMap() = default;
  DenseMap(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  void set(int x, int y, float tx, float ty, bool visible);
  Point2d target(int x, int y) const { return {tx_[index(x, y)], ty_[index(x, y)]}; }
  bool visible(int x, int y) const { return vis_[index(x, y)] != 0; }

  friend bool operator==(const DenseMap&, const DenseMap&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<float> tx_, ty_;
  std::vector<std::uint8_t> vis_;
};

/// Binary format: "WARP v1 <w> <h>\n" then per pixel, row-major,
/// little-endian float32 tx, float32 ty, uint8 visibility.
std::vector<std::uint8_t> encode_dense_map(const DenseMap& map);
DenseMap decode_dense_map(std::span<const std::uint8_t> bytes);
DenseMap read_dense_map_file(const std::filesystem::path& path);
void write_dense_map_file(const std::filesystem::path& path, const DenseMap& map);

/// Geometry taking frame i to frame j.
using WarpModel = std::variant<Homography, DenseMap>;

/// Where p should appear in a target frame of the given size; empty when it
/// falls outside that frame or is marked invisible.
std::optional<Point2d> project(const WarpModel& warp, Point p, int target_width, int target_height);

struct RepeatSample {
  std::uint64_t useful = 0;
  std::uint64_t repeated = 0;
  /// repeated / useful, empty when nothing is useful.
  std::optional<double> ratio() const;
};

enum class MatchMethod { automatic, brute_force, grid };

inline constexpr double kDefaultEpsilon = 5.0;

/// Features of frame i with a valid projection are useful; a useful feature
/// is repeated when some feature of frame j lies within `epsilon` (Euclidean)
/// of its projection. Several features may match one target.
RepeatSample pair_repeatability(std::span<const Keypoint> det_i, std::span<const Keypoint> det_j,
                                const WarpModel& warp, int target_width, int target_height,
                                double epsilon = kDefaultEpsilon,
                                MatchMethod method = MatchMethod::automatic);

/// Sum of repeated over sum of useful.
std::optional<double> pooled_repeatability(std::span<const RepeatSample> samples);
/// Per-pair ratios averaged with weights n_useful.
std::optional<double> weighted_mean_repeatability(std::span<const RepeatSample> samples);

enum class PairPolicy {
  /// Every ordered pair (i, j), i != j.
  all,
  /// (i, i+1) in both directions.
  adjacent,
  /// (i, i+1) and (i, i+2) in both directions.
  adjacent_skip,
};

std::string to_string(PairPolicy policy);
PairPolicy parse_pair_policy(const std::string& text);
std::vector<std::pair<int, int>> make_pairs(int frame_count, PairPolicy policy);

/// Frames of one scene with the warps between the evaluated pairs.
struct Sequence {
  std::vector<GrayImage> frames;
  std::vector<std::pair<int, int>> pairs;
  std::map<std::pair<int, int>, WarpModel> warps;

  /// Throws DataError naming the pair when its warp is missing.
  const WarpModel& warp(int i, int j) const;
  /// Throws DataError when a pair index is out of range or a warp is missing.
  void validate() const;
};

/// A detector under evaluation. Detection happens once per frame into a
/// scored pool; requests for n features then select from that pool.
class FeatureDetector {
 public:
  virtual ~FeatureDetector() = default;
  virtual std::string name() const = 0;
  /// `frame_index` seeds detectors whose output does not depend on pixels.
  virtual std::vector<Keypoint> candidates(const GrayImage& img, std::size_t frame_index) const = 0;
  virtual std::vector<Keypoint> select(std::span<const Keypoint> pool, std::size_t n) const {
    return top_n_by_score(pool, n);
  }
  std::vector<Keypoint> detect(const GrayImage& img, std::size_t n, std::size_t frame_index) const {
    return select(candidates(img, frame_index), n);
  }
};

struct EvalOptions {
  double epsilon = kDefaultEpsilon;
  int jobs = 1;
};

struct SequenceResult {
  std::optional<double> repeatability;
  std::vector<RepeatSample> samples;  // one per pair, in pair order
};

/// Pool-level evaluation for callers that already hold detections.
SequenceResult evaluate_detections(const Sequence& seq, std::span<const std::vector<Keypoint>> detections,
                                   const EvalOptions& options = {});

SequenceResult sequence_repeatability(const Sequence& seq, const FeatureDetector& detector, std::size_t n,
                                      const EvalOptions& options = {});

struct CurvePoint {
  std::size_t count = 0;
  std::optional<double> repeatability;
};
using Curve = std::vector<CurvePoint>;

/// 0, 25, ..., 2000.
std::vector<std::size_t> default_count_grid();

/// One sequence evaluation per count; each frame is detected once.
Curve repeatability_curve(const Sequence& seq, const FeatureDetector& detector,
                          std::span<const std::size_t> counts, const EvalOptions& options = {});

inline constexpr double kAreaMaxCount = 2000.0;

/// Trapezoidal integral of R over [0, 2000]. Points with undefined R are
/// skipped and the nearest defined value extends flat to either end.
/// Throws PreconditionError when the curve's counts do not span the range.
double area_under_curve(const Curve& curve, double max_count = kAreaMaxCount);

struct NoisePoint {
  double sigma = 0.0;
  std::optional<double> repeatability;
};

/// Gaussian noise is added independently to every frame at every sigma,
/// then the sequence is detected and scored at n features.
std::vector<NoisePoint> noise_sweep(const Sequence& seq, const FeatureDetector& detector, std::size_t n,
                                    std::span<const double> sigmas, std::uint64_t seed,
                                    const EvalOptions& options = {});

/// "count,repeatability" with undefined values written as 0.
std::string format_curve_csv(const Curve& curve);
/// "detector,A".
std::string format_auc_csv(std::span<const std::pair<std::string, double>> rows);
/// Self-contained SVG line plot of one or more curves.
std::string render_curves_svg(std::span<const std::pair<std::string, Curve>> curves);

}  // namespace cornerforge
