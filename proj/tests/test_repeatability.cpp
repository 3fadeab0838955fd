#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cornerforge/baselines.hpp"
#include "cornerforge/dataset.hpp"
#include "cornerforge/detectors.hpp"
#include "cornerforge/error.hpp"
#include "cornerforge/repeatability.hpp"
#include "support.hpp"

using namespace cornerforge;

namespace {

Sequence identity_pair(const GrayImage& img) {
  Sequence seq;
  seq.frames = {img, img};
  seq.pairs = {{0, 1}, {1, 0}};
  seq.warps.emplace(std::pair{0, 1}, Homography::identity());
  seq.warps.emplace(std::pair{1, 0}, Homography::identity());
  return seq;
}

std::vector<Keypoint> random_points(std::mt19937_64& rng, int n, int w, int h) {
  std::uniform_int_distribution<int> dx(0, w - 1), dy(0, h - 1);
  std::vector<Keypoint> out;
  for (int i = 0; i < n; ++i) out.push_back({dx(rng), dy(rng), 1.0});
  return out;
}

}  // namespace

TEST(Project, Homographies) {
  EXPECT_NEAR(project(Homography::identity(), {3, 4}, 10, 10)->x, 3.0, 1e-12);
  const auto q = project(Homography::translation(5, 0), {3, 4}, 20, 10);
  ASSERT_TRUE(q);
  EXPECT_NEAR(q->x, 8.0, 1e-12);
  EXPECT_NEAR(q->y, 4.0, 1e-12);
  EXPECT_FALSE(project(Homography::translation(5, 0), {8, 4}, 10, 10));
  EXPECT_THROW(Homography(Eigen::Matrix3d::Zero()), PreconditionError);
}

TEST(Project, DenseMapVisibility) {
  DenseMap m(4, 3);
  m.set(1, 1, 2.5f, 0.5f, true);
  m.set(2, 1, 2.5f, 0.5f, false);
  EXPECT_NEAR(project(m, {1, 1}, 4, 3)->x, 2.5, 1e-6);
  EXPECT_FALSE(project(m, {2, 1}, 4, 3));
  EXPECT_EQ(decode_dense_map(encode_dense_map(m)), m);
  auto bytes = encode_dense_map(m);
  bytes.pop_back();
  EXPECT_THROW(decode_dense_map(bytes), DataError);
}

TEST(PairRepeatability, Examples) {
  const std::vector<Keypoint> det{{10, 10, 1}, {20, 20, 1}, {30, 5, 1}};
  const auto same = pair_repeatability(det, det, Homography::identity(), 50, 50, 5.0);
  EXPECT_EQ(same.useful, 3u);
  EXPECT_EQ(same.repeated, 3u);
  EXPECT_EQ(*same.ratio(), 1.0);
  EXPECT_EQ(pair_repeatability(det, {}, Homography::identity(), 50, 50, 5.0).repeated, 0u);
  // Two within epsilon (distances 3 and 5), one about 8 away.
  const std::vector<Keypoint> target{{13, 10, 1}, {20, 25, 1}};
  const std::vector<Keypoint> far{{10, 10, 1}, {20, 20, 1}, {20, 14, 1}};
  const auto s = pair_repeatability(far, target, Homography::identity(), 50, 50, 5.0);
  EXPECT_EQ(s.useful, 3u);
  EXPECT_EQ(s.repeated, 2u);
  // Projections leaving the target frame are not useful.
  const auto out = pair_repeatability(det, det, Homography::translation(25, 0), 50, 50, 5.0);
  EXPECT_EQ(out.useful, 2u);
}

TEST(PairRepeatability, BruteForceAndGridAgree) {
  std::mt19937_64 rng(12);
  Eigen::Matrix3d m;
  m << 0.98, 0.05, 3.2, -0.04, 1.01, -2.5, 1e-5, -2e-5, 1.0;
  const Homography h(m);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_points(rng, 3000, 300, 200), b = random_points(rng, 3000, 300, 200);
    for (double eps : {0.5, 1.0, 2.5, 5.0}) {
      const auto bf = pair_repeatability(a, b, h, 300, 200, eps, MatchMethod::brute_force);
      const auto gr = pair_repeatability(a, b, h, 300, 200, eps, MatchMethod::grid);
      ASSERT_EQ(bf.useful, gr.useful);
      ASSERT_EQ(bf.repeated, gr.repeated);
    }
  }
}

TEST(PairRepeatability, MonotoneInEpsilonAndTargets) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_points(rng, 200, 100, 100), b = random_points(rng, 200, 100, 100);
    const auto w = Homography::translation(1.5, -0.5);
    std::uint64_t prev = 0;
    for (double eps : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto s = pair_repeatability(a, b, w, 100, 100, eps);
      ASSERT_GE(s.repeated, prev);
      ASSERT_LE(s.repeated, s.useful);
      prev = s.repeated;
    }
    auto more = b;
    const auto extra = random_points(rng, 50, 100, 100);
    more.insert(more.end(), extra.begin(), extra.end());
    EXPECT_GE(pair_repeatability(a, more, w, 100, 100, 3.0).repeated,
              pair_repeatability(a, b, w, 100, 100, 3.0).repeated);
  }
}

TEST(Pooling, WeightedMeanIdentity) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(0, 1000);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RepeatSample> samples;
    for (int k = 0; k < 1 + trial % 9; ++k) {
      RepeatSample s;
      s.useful = static_cast<std::uint64_t>(u(rng));
      s.repeated = s.useful ? static_cast<std::uint64_t>(u(rng)) % (s.useful + 1) : 0;
      samples.push_back(s);
    }
    const auto pooled = pooled_repeatability(samples);
    const auto mean = weighted_mean_repeatability(samples);
    ASSERT_EQ(pooled.has_value(), mean.has_value());
    if (pooled) EXPECT_NEAR(*pooled, *mean, 1e-12);
  }
}

TEST(Sequence, IdentityFramesRepeatPerfectly) {
  const auto seq = identity_pair(cornerforge::testing::scene(120, 90, 2));
  for (const char* algo : {"harris", "shi-tomasi", "fast-ref"}) {
    DetectorConfig c;
    c.algo = algo;
    const auto d = make_detector(c);
    EXPECT_EQ(*sequence_repeatability(seq, *d, 100).repeatability, 1.0) << algo;
  }
}

TEST(Sequence, RandomFramesAreIndependent) {
  // Each frame draws its own points, so identical frames do not repeat.
  const auto seq = identity_pair(GrayImage(200, 150, 0));
  DetectorConfig c;
  c.algo = "random";
  EXPECT_LT(*sequence_repeatability(seq, *make_detector(c), 1000).repeatability, 1.0);
}

TEST(Sequence, MissingWarpNamesThePair) {
  auto seq = identity_pair(GrayImage(30, 30, 0));
  seq.warps.erase({1, 0});
  try {
    seq.validate();
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("1 -> 0"), std::string::npos);
  }
}

TEST(Curve, CountZeroUndefinedAndAreaOfIdentity) {
  const auto seq = identity_pair(cornerforge::testing::scene(200, 150, 4));
  DetectorConfig c;
  c.algo = "fast-ref";
  const auto d = make_detector(c);
  const auto grid = default_count_grid();
  ASSERT_EQ(grid.size(), 81u);
  const Curve curve = repeatability_curve(seq, *d, grid);
  EXPECT_FALSE(curve[0].repeatability);
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_EQ(*curve[i].repeatability, 1.0);
  EXPECT_DOUBLE_EQ(area_under_curve(curve), 2000.0);
  EXPECT_EQ(format_curve_csv(curve).substr(0, 24), "count,repeatability\n0,0\n");
}

TEST(Area, ConstantAndPiecewiseCurves) {
  Curve half, toy;
  for (std::size_t c = 0; c <= 2000; c += 100) half.push_back({c, 0.5});
  EXPECT_DOUBLE_EQ(area_under_curve(half), 1000.0);
  toy = {{0, 0.0}, {500, 1.0}, {1000, 0.5}, {2000, 0.5}};
  EXPECT_DOUBLE_EQ(area_under_curve(toy), 0.5 * 500 * 1.0 + 0.5 * 500 * 1.5 + 1000 * 0.5);
  EXPECT_THROW(area_under_curve({{0, 1.0}, {1000, 1.0}}), PreconditionError);
}

TEST(Noise, ZeroSigmaAndRandomDetectorInvariance) {
  Sequence seq;
  DatasetOptions o;
  o.frames = 3;
  o.seed = 6;
  o.width = 160;
  o.height = 120;
  seq = make_dataset(make_synthetic_scene(200, 150, 3), o).sequence;
  DetectorConfig fc;
  fc.algo = "fast-ref";
  const auto fast = make_detector(fc);
  const std::vector<double> sigmas{0.0, 8.0};
  const auto sweep = noise_sweep(seq, *fast, 200, sigmas, 1);
  EXPECT_EQ(*sweep[0].repeatability, *sequence_repeatability(seq, *fast, 200).repeatability);
  DetectorConfig rc;
  rc.algo = "random";
  const auto rnd = make_detector(rc);
  const auto rsweep = noise_sweep(seq, *rnd, 200, sigmas, 1);
  EXPECT_EQ(*rsweep[0].repeatability, *rsweep[1].repeatability);
}

TEST(Svg, ContainsOnePolylinePerCurve) {
  const std::vector<std::pair<std::string, Curve>> curves{{"a", {{0, {}}, {10, 0.5}}}, {"b", {{0, {}}, {10, 0.7}}}};
  const std::string svg = render_curves_svg(curves);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t count = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++count;
  EXPECT_EQ(count, 2u);
}
