#pragma once

// Brute-force reference computations shared by the unit and acceptance
// tests. None of them call into the code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "cornerforge/id3.hpp"
#include "cornerforge/segment_test.hpp"

namespace cornerforge::oracle {

inline double entropy(double c, double cbar) {
  auto xl = [](double v) { return v > 0 ? v * std::log2(v) : 0.0; };
  return xl(c + cbar) - xl(c) - xl(cbar);
}

// Gain of every feature straight from the definition, then the documented
// rule: lowest index within the tie tolerance, or the lowest feature with at
// least two non-empty parts when nothing gains.
inline int best_split(const RingTrainingSet& ts) {
  double c = 0, cbar = 0;
  for (const auto& r : ts.records()) (r.corner ? c : cbar) += r.weight;
  const double h = entropy(c, cbar);
  std::vector<double> gains;
  std::vector<int> parts;
  for (int f = 0; f < ts.feature_count(); ++f) {
    double sc[3] = {0, 0, 0}, sn[3] = {0, 0, 0};
    for (const auto& r : ts.records()) {
      const int s = static_cast<int>(RingTrainingSet::state(r.key, f));
      (r.corner ? sc[s] : sn[s]) += r.weight;
    }
    double g = h;
    int nonempty = 0;
    for (int s = 0; s < 3; ++s) {
      g -= entropy(sc[s], sn[s]);
      nonempty += (sc[s] + sn[s]) > 0;
    }
    gains.push_back(g);
    parts.push_back(nonempty);
  }
  const double tol = kGainTieTolerance * std::max(1.0, h);
  const double best = *std::max_element(gains.begin(), gains.end());
  if (best > tol) {
    for (int f = 0; f < ts.feature_count(); ++f)
      if (gains[static_cast<std::size_t>(f)] >= best - tol) return f;
  }
  for (int f = 0; f < ts.feature_count(); ++f)
    if (parts[static_cast<std::size_t>(f)] >= 2) return f;
  return -1;
}

// A small consolidated set with distinct keys and random labels and weights.
inline RingTrainingSet random_training_set(std::mt19937_64& rng, int features, int size) {
  RingTrainingSet ts(features);
  std::set<std::uint32_t> used;
  std::uniform_int_distribution<int> st(0, 2), w(1, 6), coin(0, 1);
  for (int i = 0; i < size; ++i) {
    RingTrainingSet::Key k{0x55555555u};
    for (int f = 0; f < features; ++f) RingTrainingSet::set_state(k, f, static_cast<PixelState>(st(rng)));
    if (!used.insert(k[0]).second) continue;
    ts.add(k, coin(rng) == 1, static_cast<std::uint32_t>(w(rng)));
  }
  ts.consolidate();
  return ts;
}

// Largest threshold at which the segment test holds, by scanning every t.
inline int segment_score_scan(const GrayImage& img, Point p, int n) {
  int best = 0;
  for (int t = 1; t <= 255; ++t)
    if (is_corner_config(ring_config(img, p, t), n)) best = t;
  return best;
}

}  // namespace cornerforge::oracle
