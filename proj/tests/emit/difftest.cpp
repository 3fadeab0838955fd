// Compiled output of the emitter against the interpreter and the segment
// test on random patches.

#include <algorithm>
#include <cstdio>
#include <random>

#include "cornerforge/detector.hpp"
#include "cornerforge/id3.hpp"
#include "cornerforge/offsets.hpp"
#include "cornerforge/segment_test.hpp"

int emitted_fast9(const unsigned char* p, int stride, int t);
int emitted_fast12(const unsigned char* p, int stride, int t);

using namespace cornerforge;

namespace {

constexpr long kPatches = 1000000;

// Pixels are pushed towards one of the three states, and half the patches
// get a bright or dark arc on the ring, so that corners and near misses are
// both common.
void fill_patch(GrayImage& img, std::mt19937_64& rng, int t, int n) {
  std::uniform_int_distribution<int> any(0, 255), pick(0, 3), jitter(-3, 3), start(0, 15), len(n - 2, 16),
      margin(-1, 6);
  const int c = std::uniform_int_distribution<int>(std::min(t + 3, 127), std::max(252 - t, 128))(rng);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      int v;
      switch (pick(rng)) {
        case 0: v = c + t + jitter(rng); break;
        case 1: v = c - t + jitter(rng); break;
        case 2: v = c + jitter(rng); break;
        default: v = any(rng);
      }
      img.row(y)[x] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  img.row(3)[3] = static_cast<std::uint8_t>(c);
  if (pick(rng) < 2) {
    const int sign = pick(rng) < 2 ? 1 : -1;
    const int s0 = start(rng), l = len(rng);
    for (int k = 0; k < l; ++k) {
      const Offset& o = ring_offsets()[static_cast<std::size_t>((s0 + k) % 16)];
      const int v = c + sign * (t + margin(rng));
      img.row(3 + o.dy)[3 + o.dx] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }
}

}  // namespace

int main() {
  int failures = 0;
  for (int n : {9, 12}) {
    const TernaryTree tree = learn_segment_test_tree(n);
    auto emitted = n == 9 ? emitted_fast9 : emitted_fast12;
    std::mt19937_64 rng(n);
    std::uniform_int_distribution<int> threshold(1, 120);
    GrayImage img(7, 7);
    const CompiledTree interp(tree, img.stride());
    long corners = 0, mismatches = 0;
    for (long i = 0; i < kPatches; ++i) {
      const int t = threshold(rng);
      fill_patch(img, rng, t, n);
      const std::uint8_t* p = img.row(3) + 3;
      const bool got = emitted(p, static_cast<int>(img.stride()), t) != 0;
      const bool want = is_corner_config(ring_config(img, {3, 3}, t), n);
      corners += want;
      if (got != want || interp.classify(p, t) != want) ++mismatches;
    }
    std::printf("FAST-%d: %ld mismatches over %ld patches (%ld corners)\n", n, mismatches, kPatches, corners);
    failures += mismatches != 0;
  }
  return failures;
}
