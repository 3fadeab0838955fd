#include "cornerforge/detector.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>

#include "cornerforge/error.hpp"
#include "cornerforge/parallel.hpp"

namespace cornerforge {

CompiledTree::CompiledTree(const TernaryTree& tree, std::ptrdiff_t stride, GridSymmetry symmetry,
                           bool inverted) {
  const auto& src = tree.nodes();
  // Decision nodes keep their relative order; leaves become negative codes.
  std::vector<std::int32_t> remap(src.size());
  std::int32_t next = 0;
  for (std::size_t i = 0; i < src.size(); ++i)
    remap[i] = src[i].is_leaf() ? (src[i].leaf_class ? kCornerLeaf : kNonCornerLeaf) : next++;
  nodes_.reserve(static_cast<std::size_t>(next));
  for (const auto& n : src) {
    if (n.is_leaf()) continue;
    const Offset o = symmetry.apply(tree.offsets()[static_cast<std::size_t>(n.feature)]);
    Node c{};
    c.offset = static_cast<std::ptrdiff_t>(o.dy) * stride + o.dx;
    for (int s = 0; s < 3; ++s) {
      const int target = inverted ? 2 - s : s;
      c.child[target] = remap[n.child[static_cast<std::size_t>(s)]];
    }
    nodes_.push_back(c);
  }
  root_ = remap[0];
}

TreeDetector::TreeDetector(const TernaryTree& tree, const GrayImage& img)
    : tree_(tree), img_(img), compiled_(tree, img.stride()), margin_(chebyshev_radius(tree.offsets())) {}

bool TreeDetector::classify(Point p, int threshold) const {
  if (!img_.is_interior(p.x, p.y, margin_))
    throw PreconditionError("pixel too close to the border for this tree");
  return compiled_.classify(img_.row(p.y) + p.x, threshold);
}

std::vector<Point> TreeDetector::detect(int threshold, const DetectOptions& options) const {
  if (threshold < 1) throw PreconditionError("threshold must be >= 1");
  const int m = margin_;
  const int x0 = m, x1 = img_.width() - m;
  if (x1 <= x0 || img_.height() - m <= m) return {};

  if (options.strategy == DetectStrategy::per_pixel || compiled_.root() < 0) {
    return parallel_strips<Point>(m, img_.height() - m, options.jobs,
                                  [&](int y0, int y1, std::vector<Point>& out) {
                                    for (int y = y0; y < y1; ++y) {
                                      const std::uint8_t* row = img_.row(y);
                                      for (int x = x0; x < x1; ++x)
                                        if (compiled_.classify(row + x, threshold)) out.push_back({x, y});
                                    }
                                  });
  }

  // Outcome after the first two tests, indexed by 3 * state1 + state2.
  const auto& nodes = compiled_.nodes();
  const auto& root = nodes[static_cast<std::size_t>(compiled_.root())];
  const std::ptrdiff_t off1 = root.offset;
  std::ptrdiff_t off2 = off1;
  bool second_shared = true;
  bool any_second = false;
  for (std::int32_t c : root.child) {
    if (c < 0) continue;
    const std::ptrdiff_t o = nodes[static_cast<std::size_t>(c)].offset;
    if (any_second && o != off2) second_shared = false;
    off2 = o;
    any_second = true;
  }
  std::array<std::int32_t, 9> table{};
  for (int s1 = 0; s1 < 3; ++s1)
    for (int s2 = 0; s2 < 3; ++s2) {
      const std::int32_t c = root.child[s1];
      table[static_cast<std::size_t>(3 * s1 + s2)] =
          (c < 0 || !second_shared) ? c : nodes[static_cast<std::size_t>(c)].child[s2];
    }
  if (!second_shared) off2 = off1;

  return parallel_strips<Point>(
      m, img_.height() - m, options.jobs, [&](int y0, int y1, std::vector<Point>& out) {
        std::vector<std::uint8_t> code(static_cast<std::size_t>(img_.width()));
        for (int y = y0; y < y1; ++y) {
          const std::uint8_t* __restrict row = img_.row(y);
          std::uint8_t* __restrict codes = code.data();
          for (int x = x0; x < x1; ++x) {
            const int c = row[x];
            const int v1 = row[x + off1];
            const int v2 = row[x + off2];
            const int s1 = (v1 > c - threshold) + (v1 >= c + threshold);
            const int s2 = (v2 > c - threshold) + (v2 >= c + threshold);
            codes[x] = static_cast<std::uint8_t>(3 * s1 + s2);
          }
          for (int x = x0; x < x1; ++x) {
            const std::int32_t k = table[codes[x]];
            if (k == CompiledTree::kNonCornerLeaf) continue;
            if (k == CompiledTree::kCornerLeaf ||
                compiled_.walk(k, row + x, threshold) == CompiledTree::kCornerLeaf)
              out.push_back({x, y});
          }
        }
      });
}

int TreeDetector::score_bisect(Point p, int* evaluations) const {
  int evals = 1;
  if (!classify(p, 1)) throw NotACornerError("pixel is not a corner at threshold 1");
  // Invariant: corner at lo, not a corner above hi.
  int lo = 1, hi = 255;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    ++evals;
    if (classify(p, mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  if (evaluations) *evaluations = evals;
  return lo;
}

int TreeDetector::score_iterate(Point p, int* iterations) const {
  if (!classify(p, 1)) throw NotACornerError("pixel is not a corner at threshold 1");
  const std::uint8_t* center = img_.row(p.y) + p.x;
  const int c = *center;
  std::vector<std::ptrdiff_t> offsets;
  for (const Offset& o : tree_.offsets()) offsets.push_back(static_cast<std::ptrdiff_t>(o.dy) * img_.stride() + o.dx);

  int t = 1;
  int iters = 0;
  while (true) {
    ++iters;
    // Smallest amount by which a passing pixel clears the threshold.
    int margin = std::numeric_limits<int>::max();
    for (std::ptrdiff_t off : offsets) {
      const int diff = std::abs(center[off] - c);
      if (diff >= t) margin = std::min(margin, diff - t);
    }
    if (margin == std::numeric_limits<int>::max() || t + margin + 1 > 255) {
      t = 255;
      break;
    }
    const int next = t + margin + 1;
    if (!compiled_.classify(center, next)) {
      t = next - 1;
      break;
    }
    t = next;
  }
  if (iterations) *iterations = iters;
  return t;
}

bool classify_pixel(const TernaryTree& tree, const GrayImage& img, Point p, int threshold) {
  return TreeDetector(tree, img).classify(p, threshold);
}

std::vector<Point> detect(const TernaryTree& tree, const GrayImage& img, int threshold,
                          const DetectOptions& options) {
  return TreeDetector(tree, img).detect(threshold, options);
}

int corner_score_bisect(const TernaryTree& tree, const GrayImage& img, Point p) {
  return TreeDetector(tree, img).score_bisect(p);
}

int corner_score_iterate(const TernaryTree& tree, const GrayImage& img, Point p) {
  return TreeDetector(tree, img).score_iterate(p);
}

void sort_raster(std::vector<Keypoint>& points) {
  std::ranges::sort(points, [](const Keypoint& a, const Keypoint& b) {
    return a.position() < b.position();
  });
}

std::vector<Keypoint> nonmax_suppress(std::span<const Keypoint> points) {
  std::vector<Keypoint> pts(points.begin(), points.end());
  sort_raster(pts);
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].position() == pts[i - 1].position())
      throw PreconditionError("nonmax_suppress: duplicate keypoint position");

  // Keypoints of row y occupy [row_begin(y), row_begin(y + 1)).
  auto row_range = [&](int y) {
    auto lo = std::ranges::lower_bound(pts, y, {}, &Keypoint::y);
    auto hi = std::ranges::upper_bound(pts, y, {}, &Keypoint::y);
    return std::pair{lo, hi};
  };

  std::vector<Keypoint> out;
  out.reserve(pts.size());
  std::size_t i = 0;
  while (i < pts.size()) {
    const int y = pts[i].y;
    const auto above = row_range(y - 1), here = row_range(y), below = row_range(y + 1);
    // Cursors into the neighbouring rows advance with x.
    auto a = above.first, b = below.first;
    for (auto it = here.first; it != here.second; ++it, ++i) {
      const Keypoint& p = *it;
      bool keep = true;
      auto check = [&](const Keypoint& q) {
        if (q.score > p.score || (q.score == p.score && q.position() < p.position())) keep = false;
      };
      while (a != above.second && a->x < p.x - 1) ++a;
      for (auto q = a; keep && q != above.second && q->x <= p.x + 1; ++q) check(*q);
      if (keep && it != here.first && std::prev(it)->x == p.x - 1) check(*std::prev(it));
      if (keep && std::next(it) != here.second && std::next(it)->x == p.x + 1) check(*std::next(it));
      while (b != below.second && b->x < p.x - 1) ++b;
      for (auto q = b; keep && q != below.second && q->x <= p.x + 1; ++q) check(*q);
      if (keep) out.push_back(p);
    }
  }
  return out;
}

std::vector<Keypoint> top_n_by_score(std::span<const Keypoint> points, std::size_t n) {
  std::vector<Keypoint> pts(points.begin(), points.end());
  if (n >= pts.size()) {
    sort_raster(pts);
    return pts;
  }
  if (n == 0) return {};
  std::ranges::stable_sort(pts, [](const Keypoint& a, const Keypoint& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.position() < b.position();
  });
  // Candidate cut points are the ends of score classes (and 0).
  std::size_t best = 0;
  std::size_t best_dist = n;
  for (std::size_t k = 1; k <= pts.size(); ++k) {
    if (k < pts.size() && pts[k].score == pts[k - 1].score) continue;
    const std::size_t dist = k > n ? k - n : n - k;
    if (dist < best_dist) {
      best = k;
      best_dist = dist;
    }
    if (k >= n) break;
  }
  pts.resize(best);
  sort_raster(pts);
  return pts;
}

std::vector<Keypoint> detect_keypoints(const TernaryTree& tree, const GrayImage& img, int threshold,
                                       const DetectOptions& options) {
  const TreeDetector det(tree, img);
  const auto corners = det.detect(threshold, options);
  std::vector<Keypoint> scored(corners.size());
  parallel_for(corners.size(), options.jobs, [&](std::size_t i) {
    scored[i] = {corners[i].x, corners[i].y, static_cast<double>(det.score_bisect(corners[i]))};
  });
  return nonmax_suppress(scored);
}

std::string format_keypoints(std::span<const Keypoint> points) {
  std::string out;
  char line[96];
  for (const auto& k : points) {
    std::snprintf(line, sizeof line, "%d %d %.10g\n", k.x, k.y, k.score);
    out += line;
  }
  return out;
}

std::vector<Keypoint> parse_keypoints(const std::string& text) {
  std::vector<Keypoint> out;
  std::istringstream in(text);
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    Keypoint k;
    std::string extra;
    if (!(fields >> k.x >> k.y >> k.score) || (fields >> extra))
      throw ParseError(number, "expected \"x y score\"");
    out.push_back(k);
  }
  return out;
}

}  // namespace cornerforge
