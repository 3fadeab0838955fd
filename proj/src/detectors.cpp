#include "cornerforge/detectors.hpp"

#include <algorithm>

#include "cornerforge/baselines.hpp"
#include "cornerforge/detector.hpp"
#include "cornerforge/error.hpp"
#include "cornerforge/faster.hpp"
#include "cornerforge/id3.hpp"
#include "cornerforge/parallel.hpp"
#include "cornerforge/segment_test.hpp"
#include "cornerforge/synthetic.hpp"

namespace cornerforge {

namespace {

class FastReference final : public FeatureDetector {
 public:
  FastReference(int n, int threshold, int jobs) : n_(n), threshold_(threshold), jobs_(jobs) {}
  std::string name() const override { return "fast-ref"; }
  std::vector<Keypoint> candidates(const GrayImage& img, std::size_t) const override {
    const auto corners = detect_fast_n(img, n_, threshold_, jobs_);
    std::vector<Keypoint> pts(corners.size());
    parallel_for(corners.size(), jobs_, [&](std::size_t i) {
      pts[i] = {corners[i].x, corners[i].y, static_cast<double>(segment_test_score(img, corners[i], n_))};
    });
    return nonmax_suppress(pts);
  }

 private:
  int n_, threshold_, jobs_;
};

class FastTree final : public FeatureDetector {
 public:
  FastTree(TernaryTree tree, int threshold, int jobs)
      : tree_(std::move(tree)), threshold_(threshold), jobs_(jobs) {}
  std::string name() const override { return "fast-tree"; }
  std::vector<Keypoint> candidates(const GrayImage& img, std::size_t) const override {
    return detect_keypoints(tree_, img, threshold_, {DetectStrategy::batched, jobs_});
  }

 private:
  TernaryTree tree_;
  int threshold_, jobs_;
};

class Faster final : public FeatureDetector {
 public:
  Faster(TernaryTree tree, int threshold, int jobs) : tree_(std::move(tree)), threshold_(threshold), jobs_(jobs) {}
  std::string name() const override { return "faster"; }
  std::vector<Keypoint> candidates(const GrayImage& img, std::size_t) const override {
    const auto corners = detect_sixteenfold(tree_, img, threshold_, jobs_);
    const SixteenFold sf(tree_, img.stride());
    std::vector<Keypoint> pts(corners.size());
    parallel_for(corners.size(), jobs_, [&](std::size_t i) {
      pts[i] = {corners[i].x, corners[i].y, static_cast<double>(sixteenfold_score(sf, img, corners[i]))};
    });
    return nonmax_suppress(pts);
  }

 private:
  TernaryTree tree_;
  int threshold_, jobs_;
};

class Response final : public FeatureDetector {
 public:
  Response(bool harris, double sigma, int jobs) : harris_(harris), sigma_(sigma), jobs_(jobs) {}
  std::string name() const override { return harris_ ? "harris" : "shi-tomasi"; }
  std::vector<Keypoint> candidates(const GrayImage& img, std::size_t) const override {
    const auto tensor = structure_tensor(img, sigma_, jobs_);
    return response_maxima(harris_ ? harris_response(tensor) : shi_tomasi_response(tensor));
  }

 private:
  bool harris_;
  double sigma_;
  int jobs_;
};

// The pool ranks points in draw order; selection keeps a prefix and gives
// every kept point the same score.
class RandomScatter final : public FeatureDetector {
 public:
  RandomScatter(std::uint64_t seed, std::size_t pool) : seed_(seed), pool_(pool) {}
  std::string name() const override { return "random"; }
  std::vector<Keypoint> candidates(const GrayImage& img, std::size_t frame_index) const override {
    const long long interior = std::max(0, img.width() - 6) * static_cast<long long>(std::max(0, img.height() - 6));
    const std::size_t n = std::min(pool_, static_cast<std::size_t>(interior));
    const auto pts = random_interior_points(img.width(), img.height(), n, mix_seed(seed_, frame_index));
    std::vector<Keypoint> out;
    out.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) out.push_back({pts[i].x, pts[i].y, static_cast<double>(n - i)});
    return out;
  }
  std::vector<Keypoint> select(std::span<const Keypoint> pool, std::size_t n) const override {
    std::vector<Keypoint> out = top_n_by_score(pool, n);
    for (auto& k : out) k.score = 1.0;
    return out;
  }

 private:
  std::uint64_t seed_;
  std::size_t pool_;
};

}  // namespace

const std::vector<std::string>& detector_names() {
  static const std::vector<std::string> names = {"fast-ref", "fast-tree", "faster", "harris", "shi-tomasi", "random"};
  return names;
}

std::unique_ptr<FeatureDetector> make_detector(const DetectorConfig& c) {
  if (c.threshold < 1 || c.threshold > 255) throw PreconditionError("threshold must be in 1..255");
  if (c.algo == "fast-ref") return std::make_unique<FastReference>(c.n, c.threshold, c.jobs);
  if (c.algo == "fast-tree") {
    TernaryTree tree = c.tree ? *c.tree : learn_segment_test_tree(c.n, {.jobs = c.jobs});
    return std::make_unique<FastTree>(std::move(tree), c.threshold, c.jobs);
  }
  if (c.algo == "faster") {
    if (!c.tree) throw PreconditionError("faster detector needs a tree");
    return std::make_unique<Faster>(FasterTree(*c.tree).tree(), c.threshold, c.jobs);
  }
  if (c.algo == "harris" || c.algo == "shi-tomasi") return std::make_unique<Response>(c.algo == "harris", c.sigma, c.jobs);
  if (c.algo == "random") return std::make_unique<RandomScatter>(c.seed, c.random_pool);
  throw PreconditionError("unknown detector '" + c.algo + "'");
}

}  // namespace cornerforge
