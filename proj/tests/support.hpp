#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>

#include "cornerforge/id3.hpp"
#include "cornerforge/image.hpp"
#include "cornerforge/pgm.hpp"
#include "cornerforge/synthetic.hpp"
#include "cornerforge/ternary_tree.hpp"

namespace cornerforge::testing {

// Exhaustively learned FAST-n trees are slow to build, so they are cached
// next to the test binaries and reused by later test processes.
inline const TernaryTree& exact_tree(int n) {
  static std::map<int, TernaryTree> memo;
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  const std::filesystem::path cache =
      std::filesystem::path(CORNERFORGE_TEST_CACHE_DIR) / ("fast" + std::to_string(n) + ".tree");
  TernaryTree tree;
  if (std::filesystem::exists(cache)) {
    tree = deserialize_tree(read_text_file(cache));
  } else {
    tree = learn_segment_test_tree(n);
    std::filesystem::create_directories(cache.parent_path());
    write_text_file(cache, serialize_tree(tree));
  }
  return memo.emplace(n, std::move(tree)).first->second;
}

inline GrayImage random_image(int w, int h, std::uint64_t seed, int lo = 0, int hi = 255) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(lo, hi);
  GrayImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img(x, y) = static_cast<std::uint8_t>(d(rng));
  return img;
}

// Piecewise-constant synthetic content with mild noise: corner-rich but
// not white noise.
inline GrayImage scene(int w, int h, std::uint64_t seed, double sigma = 2.0) {
  return add_gaussian_noise(make_synthetic_scene(w, h, seed), sigma, seed ^ 0x5eedull);
}

inline GrayImage clamp_range(const GrayImage& img, int lo, int hi) {
  GrayImage out = img;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      out(x, y) = static_cast<std::uint8_t>(std::clamp<int>(img(x, y), lo, hi));
  return out;
}

}  // namespace cornerforge::testing
