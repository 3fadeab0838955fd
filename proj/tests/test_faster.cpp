#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "cornerforge/dataset.hpp"
#include "cornerforge/error.hpp"
#include "cornerforge/faster.hpp"
#include "support.hpp"

using namespace cornerforge;

namespace {

TernaryTree leaf(bool c, const OffsetTable& o = default_faster_offsets()) { return TernaryTree::leaf(c, o); }

// One test on slot k: brighter fires, everything else does not.
TernaryTree single_test(int k) {
  return TernaryTree::node(k, leaf(true), leaf(false), leaf(false));
}

Sequence small_training(std::uint64_t seed) {
  DatasetOptions o;
  o.frames = 3;
  o.width = 96;
  o.height = 72;
  o.warp_magnitude = 0.5;
  o.noise_sigma = 1;
  o.seed = seed;
  return make_dataset(make_synthetic_scene(120, 90, seed), o).sequence;
}

}  // namespace

TEST(Offsets, DefaultTable) {
  const OffsetTable t = default_faster_offsets();
  ASSERT_EQ(t.size(), 48u);
  EXPECT_EQ(t[0], (Offset{-3, -3}));
  EXPECT_EQ(normalize_faster_offsets({{2, 0}, {-1, 4}, {0, 1}}), (OffsetTable{{-1, 4}, {2, 0}, {0, 1}}));
  EXPECT_EQ(chebyshev_radius(t), 3);
  EXPECT_EQ(symmetric_closure(t), t);
  EXPECT_THROW(normalize_faster_offsets({{1, 0}, {1, 0}}), DataError);
  const OffsetTable parsed = parse_offset_table("# two\n1 0\n0 2\n");
  EXPECT_EQ(parsed, (OffsetTable{{1, 0}, {0, 2}}));
  EXPECT_EQ(symmetric_closure(parsed).size(), 8u);
}

TEST(Cost, Examples) {
  const std::vector<double> d3500{3500, 3500};
  EXPECT_DOUBLE_EQ(faster_cost(1.0, d3500, 10000), 8.0);
  const std::vector<double> d7000{7000};
  EXPECT_DOUBLE_EQ(faster_cost(2.0, d7000, 5000), 1.25 * 5.0 * 1.25);
  const std::vector<double> none{0};
  EXPECT_GE(faster_cost(1e9, none, 0), 1.0);
  EXPECT_NEAR(faster_cost(1e9, none, 0), 1.0, 1e-12);
  EXPECT_TRUE(std::isinf(faster_cost(0.0, d3500, 3)));
}

TEST(Schedule, TemperatureAndAcceptance) {
  EXPECT_DOUBLE_EQ(anneal_temperature(0, 5000, 30, 100), 100.0);
  EXPECT_NEAR(anneal_temperature(5000, 5000, 30, 100), 100.0 * std::exp(-30.0), 1e-20);
  EXPECT_NEAR(anneal_temperature(5000, 5000, 30, 100), 9.36e-12, 0.01e-12);
  EXPECT_EQ(acceptance_probability(5.0, 5.0, 1e-9), 1.0);
  EXPECT_EQ(acceptance_probability(5.0, 4.0, 1.0), 1.0);
  EXPECT_NEAR(acceptance_probability(4.0, 5.0, 2.0), std::exp(-0.5), 1e-15);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(acceptance_probability(inf, inf, 1.0), 1.0);
  EXPECT_EQ(acceptance_probability(3.0, inf, 1.0), 0.0);
}

TEST(Mutate, ForcedCollapseOfDepthOneTree) {
  std::mt19937_64 rng(3);
  const TernaryTree t = TernaryTree::node(4, leaf(true), leaf(false), leaf(true));
  int collapsed = 0;
  for (int i = 0; i < 200; ++i) {
    const Mutation m = mutate(t, rng, MutationKind::collapse);
    if (m.node != 0) continue;
    EXPECT_EQ(m.kind, MutationKind::collapse);
    EXPECT_TRUE(m.tree.is_leaf_tree());
    ++collapsed;
  }
  EXPECT_GT(collapsed, 0);
}

TEST(Mutate, ConstraintHoldsOverManyMutations) {
  std::mt19937_64 rng(11);
  TernaryTree t = random_depth1_tree(default_faster_offsets(), rng);
  ASSERT_TRUE(satisfies_s_leaf_constraint(t));
  for (int i = 0; i < 10000; ++i) {
    t = mutate(t, rng).tree;
    ASSERT_TRUE(satisfies_s_leaf_constraint(t)) << i;
    if (t.size() > 60) t = random_depth1_tree(default_faster_offsets(), rng);
  }
}

TEST(Mutate, KindFrequencies) {
  // Internal nodes pick among three kinds and non-s leaves among two, each
  // uniformly. Chi-square critical values at p = 0.01: 9.21 (2 dof), 6.63 (1 dof).
  std::mt19937_64 rng(21);
  const TernaryTree t = TernaryTree::node(2, TernaryTree::node(5, leaf(true), leaf(false), leaf(false)),
                                          leaf(false), leaf(true));
  const auto links = t.parents();
  std::map<MutationKind, double> internal, outer_leaf;
  for (int i = 0; i < 30000; ++i) {
    const Mutation m = mutate(t, rng);
    const auto& n = t.nodes()[m.node];
    if (!n.is_leaf())
      internal[m.kind] += 1;
    else if (links[m.node].branch != PixelState::similar)
      outer_leaf[m.kind] += 1;
    else
      ASSERT_EQ(m.kind, MutationKind::grow);
  }
  double total = 0, chi2 = 0;
  for (auto [k, c] : internal) total += c;
  ASSERT_EQ(internal.size(), 3u);
  for (auto [k, c] : internal) chi2 += (c - total / 3) * (c - total / 3) / (total / 3);
  EXPECT_LT(chi2, 9.21);
  total = outer_leaf[MutationKind::grow] + outer_leaf[MutationKind::flip];
  chi2 = 0;
  for (auto k : {MutationKind::grow, MutationKind::flip})
    chi2 += (outer_leaf[k] - total / 2) * (outer_leaf[k] - total / 2) / (total / 2);
  EXPECT_LT(chi2, 6.63);
}

TEST(Serialization, RoundTripAndConstraint) {
  const FasterTree t(TernaryTree::node(0, single_test(7), leaf(false), leaf(true)));
  const std::string text = serialize_faster_tree(t);
  EXPECT_NE(text.find("\nO 0 -3 -3\n"), std::string::npos);
  EXPECT_EQ(deserialize_faster_tree(text), t);
  const TernaryTree bad = TernaryTree::node(0, leaf(false), leaf(true), leaf(false));
  EXPECT_THROW(FasterTree{bad}, DataError);
  EXPECT_THROW(deserialize_faster_tree(serialize_tree(bad)), DataError);
}

TEST(SixteenFold, ConstantImageNeverFires) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    TernaryTree t = random_depth1_tree(default_faster_offsets(), rng);
    for (int k = 0; k < 5; ++k) t = mutate(t, rng).tree;
    if (t.nodes()[0].is_leaf() && t.nodes()[0].leaf_class) continue;
    EXPECT_TRUE(detect_sixteenfold(t, GrayImage(40, 30, 128), 1).empty());
  }
}

TEST(SixteenFold, MatchesExplicitUnionOfTransforms) {
  const OffsetTable offs = default_faster_offsets();
  const GrayImage img = cornerforge::testing::scene(70, 60, 8, 4.0);
  const int t = 20;
  for (int k : {0, 5, 17, 40}) {
    std::vector<std::uint8_t> want(static_cast<std::size_t>(img.width() * img.height()), 0);
    for (int y = 3; y < img.height() - 3; ++y)
      for (int x = 3; x < img.width() - 3; ++x) {
        const int c = img(x, y);
        bool fire = false;
        for (const auto& g : GridSymmetry::all()) {
          const Offset o = g.apply(offs[static_cast<std::size_t>(k)]);
          const int v = img(x + o.dx, y + o.dy);
          fire = fire || v >= c + t || v <= c - t;
        }
        want[static_cast<std::size_t>(y * img.width() + x)] = fire;
      }
    EXPECT_EQ(apply_sixteenfold(single_test(k), img, t), want) << k;
  }
}

TEST(SixteenFold, CommutesWithImageSymmetries) {
  std::mt19937_64 rng(6);
  TernaryTree tree = random_depth1_tree(default_faster_offsets(), rng);
  for (int k = 0; k < 12; ++k) tree = mutate(tree, rng).tree;
  const GrayImage img = cornerforge::testing::scene(50, 40, 9);
  const auto base = detect_sixteenfold(tree, img, 15);
  auto as_set = [](const std::vector<Point>& v) { return std::set<Point>(v.begin(), v.end()); };

  std::set<Point> rotated;
  for (const Point& p : base) rotated.insert(rotate90_point(p, img.height()));
  EXPECT_EQ(as_set(detect_sixteenfold(tree, rotate90(img), 15)), rotated);

  std::set<Point> flipped;
  for (const Point& p : base) flipped.insert({img.width() - 1 - p.x, p.y});
  EXPECT_EQ(as_set(detect_sixteenfold(tree, flip_horizontal(img), 15)), flipped);

  EXPECT_EQ(detect_sixteenfold(tree, invert(img), 15), base);
  EXPECT_EQ(detect_sixteenfold(tree, img, 15, 3), base);
}

TEST(SixteenFold, ScoreIsLargestFiringThreshold) {
  const TernaryTree tree = single_test(9);
  const GrayImage img = cornerforge::testing::scene(60, 50, 12, 3.0);
  const SixteenFold sf(tree, img.stride());
  int checked = 0;
  for (const Point& p : detect_sixteenfold(tree, img, 1)) {
    const int s = sixteenfold_score(sf, img, p);
    EXPECT_TRUE(sf.classify(img.row(p.y) + p.x, s));
    if (s < 255) EXPECT_FALSE(sf.classify(img.row(p.y) + p.x, s + 1));
    if (++checked == 200) break;
  }
  EXPECT_THROW(sixteenfold_score(sf, GrayImage(20, 20, 3), {10, 10}), NotACornerError);
}

TEST(SixteenFold, ScoreMatchesLinearScanForNonMonotoneTree) {
  // Fires only when the first pixel is similar, so larger thresholds can
  // switch the output back on.
  const TernaryTree tree = TernaryTree::node(0, leaf(false), TernaryTree::node(1, leaf(true), leaf(false), leaf(true)),
                                             leaf(false));
  const GrayImage img = cornerforge::testing::scene(50, 40, 13, 4.0);
  const SixteenFold sf(tree, img.stride());
  int checked = 0;
  for (int y = 3; y < img.height() - 3; ++y)
    for (int x = 3; x < img.width() - 3; ++x) {
      const std::uint8_t* px = img.row(y) + x;
      int expected = 0;
      for (int t = 1; t <= 255; ++t)
        if (sf.classify(px, t)) expected = t;
      if (expected == 0) {
        EXPECT_THROW(sixteenfold_score(sf, img, {x, y}), NotACornerError);
      } else {
        EXPECT_EQ(sixteenfold_score(sf, img, {x, y}), expected) << x << "," << y;
        ++checked;
      }
    }
  EXPECT_GT(checked, 0);
}

TEST(Distill, NeverFiringTreeGivesNonCornerLeaf) {
  const std::vector<GrayImage> imgs{cornerforge::testing::scene(60, 50, 1)};
  const TernaryTree d = distill(FasterTree(), imgs);
  EXPECT_TRUE(d.is_leaf_tree());
  EXPECT_EQ(d.nodes()[0].leaf_class, 0);
}

TEST(Distill, ReproducesTrainingFrames) {
  const std::vector<GrayImage> imgs{cornerforge::testing::scene(80, 60, 2), cornerforge::testing::scene(80, 60, 3)};
  const FasterTree tree(TernaryTree::node(0, single_test(30), leaf(false), leaf(true)));
  DistillOptions o;
  o.threshold = 25;
  const TernaryTree d = distill(tree, imgs, o);
  for (const auto& img : imgs) EXPECT_EQ(distill_agreement(d, tree, img, 25), 1.0);
}

TEST(Anneal, SmallRunIsDeterministicAndImproves) {
  const Sequence training = small_training(5);
  AnnealOptions o;
  o.max_iterations = 120;
  o.runs = 2;
  o.threshold = 25;
  const AnnealResult a = anneal(training, o, 7), b = anneal(training, o, 7);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.best_cost, b.best_cost);
  ASSERT_EQ(a.trace.size(), 121u);
  for (std::size_t i = 1; i < a.trace.size(); ++i) EXPECT_LE(a.trace[i].best_cost, a.trace[i - 1].best_cost);
  EXPECT_TRUE(a.constraint_held);
  EXPECT_LE(a.best_cost, a.initial_cost);
  EXPECT_EQ(evaluate_tree(a.best.tree(), training, o).cost, a.best_cost);

  const MultiRunResult m = multi_run(training, o);
  ASSERT_EQ(m.runs.size(), 2u);
  EXPECT_EQ(m.runs[0].seed, o.seed);
  EXPECT_EQ(m.best().best_cost, m.min_cost);
  EXPECT_EQ(format_trace_csv(a.trace).substr(0, 36), "iteration,cost,best_cost,temperature");
}
