#pragma once

// Named detectors behind the FeatureDetector interface.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cornerforge/repeatability.hpp"
#include "cornerforge/ternary_tree.hpp"

namespace cornerforge {

struct DetectorConfig {
  /// fast-ref, fast-tree, faster, harris, shi-tomasi or random.
  std::string algo = "fast-tree";
  /// Contiguity for fast-ref, and for fast-tree when no tree is given.
  int n = 9;
  /// Lowest threshold considered by the tree-based detectors; candidates
  /// are scored and suppressed above it.
  int threshold = 1;
  /// fast-tree: any TernaryTree (learned FAST-n by default).
  /// faster: the annealed tree, applied with all sixteen transforms.
  std::optional<TernaryTree> tree;
  double sigma = 2.5;
  std::uint64_t seed = 1;
  /// Size of the random detector's ranked pool; bounds its feature count.
  std::size_t random_pool = 10000;
  int jobs = 1;
};

const std::vector<std::string>& detector_names();

/// Throws PreconditionError for an unknown algorithm name.
std::unique_ptr<FeatureDetector> make_detector(const DetectorConfig& config);

}  // namespace cornerforge
