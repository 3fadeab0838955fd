#pragma once

// Synthetic multi-view datasets and their on-disk layout:
//   dataset.txt          manifest ("frames N", "size W H", "pairs POLICY")
//   frame_000.pgm ...    frames
//   H_<i>_to_<j>.txt     homography per evaluated pair, or
//   W_<i>_to_<j>.warp    dense map per evaluated pair

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cornerforge/geometry.hpp"
#include "cornerforge/image.hpp"
#include "cornerforge/repeatability.hpp"

namespace cornerforge {

struct DatasetOptions {
  int frames = 4;
  /// Scales rotation, scale change, translation and perspective together;
  /// 1 gives up to about 17 degrees of rotation and 20% scale change.
  double warp_magnitude = 1.0;
  /// Gaussian noise added to each frame after resampling.
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  /// Frame size; 0 means the base image size.
  int width = 0;
  int height = 0;
  PairPolicy pairs = PairPolicy::all;
};

struct Dataset {
  Sequence sequence;
  PairPolicy policy = PairPolicy::all;
  /// Maps frame coordinates to base image coordinates.
  std::vector<Homography> frame_to_base;
};

/// Frame k is the base image resampled through a random homography; frame 0
/// is the base itself when the sizes agree. H_i_to_j = M_j^-1 M_i where M_k
/// is frame_to_base[k].
Dataset make_dataset(const GrayImage& base, const DatasetOptions& options);

/// Writes frames, warps for every pair and the manifest. `header` lines are
/// written as "# " comments at the top of the manifest.
void write_dataset(const std::filesystem::path& dir, const Dataset& dataset,
                   const std::vector<std::string>& header = {});

/// Reads a dataset directory. Throws IoError for unreadable files and
/// DataError for a missing warp or frames of different sizes.
Sequence load_dataset(const std::filesystem::path& dir);

std::string frame_file_name(int index);
std::string homography_file_name(int i, int j);
std::string dense_map_file_name(int i, int j);

}  // namespace cornerforge
