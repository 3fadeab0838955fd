#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "cornerforge/error.hpp"
#include "cornerforge/id3.hpp"
#include "cornerforge/segment_test.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cornerforge;

namespace {

RingTrainingSet::Key key_of(std::initializer_list<std::pair<int, PixelState>> states) {
  RingTrainingSet::Key k{0x55555555u};
  for (auto [f, s] : states) RingTrainingSet::set_state(k, f, s);
  return k;
}

}  // namespace

TEST(Entropy, Values) {
  EXPECT_EQ(entropy(5, 0), 0.0);
  EXPECT_DOUBLE_EQ(entropy(1, 1), 2.0);
  EXPECT_NEAR(entropy(3, 1), 8.0 - 3.0 * std::log2(3.0), 1e-12);
  EXPECT_NEAR(entropy(3, 1), 3.2451, 1e-4);
}

TEST(BestSplit, SingleSeparatingFeature) {
  RingTrainingSet ts;
  ts.add(key_of({{7, PixelState::brighter}}), true, 1);
  ts.add(key_of({{7, PixelState::darker}}), false, 1);
  ts.add(key_of({{7, PixelState::darker}, {2, PixelState::brighter}}), false, 1);
  ts.add(key_of({{7, PixelState::brighter}, {2, PixelState::brighter}}), true, 1);
  ts.consolidate();
  EXPECT_EQ(best_split(ts), 7);
}

TEST(BestSplit, PureSetIsAPreconditionError) {
  RingTrainingSet ts;
  ts.add(key_of({}), true, 3);
  ts.add(key_of({{1, PixelState::darker}}), true, 1);
  EXPECT_THROW(best_split(ts), PreconditionError);
}

TEST(BestSplit, ZeroGainFallsBackToFirstSeparatingFeature) {
  // XOR of features 4 and 9: neither split alone gains information.
  RingTrainingSet ts;
  for (auto a : {PixelState::darker, PixelState::brighter})
    for (auto b : {PixelState::darker, PixelState::brighter})
      ts.add(key_of({{4, a}, {9, b}}), (a == b), 1);
  ts.consolidate();
  EXPECT_EQ(best_split(ts), 4);
  const TernaryTree t = build_tree(ts, ring_offsets());
  for (const auto& r : ts.records()) EXPECT_EQ(t.classify(RingConfig::from_packed(r.key[0])), r.corner);
}

TEST(BestSplit, MatchesBruteForceOnRandomSets) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const RingTrainingSet ts = oracle::random_training_set(rng, 2 + trial % 15, 2 + trial % 40);
    if (ts.corner_weight() == 0 || ts.non_corner_weight() == 0) continue;
    EXPECT_EQ(best_split(ts), oracle::best_split(ts)) << "trial " << trial;
  }
}

TEST(BestSplit, TiesGoToLowestIndex) {
  // Features 3 and 11 carry identical information.
  RingTrainingSet ts;
  ts.add(key_of({{3, PixelState::brighter}, {11, PixelState::brighter}}), true, 2);
  ts.add(key_of({{3, PixelState::darker}, {11, PixelState::darker}}), false, 2);
  ts.consolidate();
  EXPECT_EQ(best_split(ts), 3);
}

TEST(TrainingSet, ConsolidateMergesAndDetectsConflicts) {
  RingTrainingSet ts;
  ts.add(key_of({}), false, 2);
  ts.add(key_of({}), false, 5);
  ts.consolidate();
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts.records()[0].weight, 7u);
  ts.add(key_of({}), true, 1);
  EXPECT_THROW(ts.consolidate(), DataError);
}

TEST(BuildTree, SingleRecordGivesLeaf) {
  RingTrainingSet ts;
  ts.add(key_of({}), true, 1);
  const TernaryTree t = build_tree(ts, ring_offsets());
  EXPECT_TRUE(t.is_leaf_tree());
  EXPECT_TRUE(t.classify(RingConfig()));
}

TEST(ExtractTrainingData, ConstantImage) {
  const std::vector<GrayImage> imgs{GrayImage(20, 20, 50)};
  const auto ts = extract_training_data(imgs, 9, 10);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts.records()[0].key[0], RingConfig().packed());
  EXPECT_FALSE(ts.records()[0].corner);
  EXPECT_EQ(ts.records()[0].weight, 14u * 14u);
}

TEST(ExtractTrainingData, LabelsMatchSegmentTest) {
  const std::vector<GrayImage> imgs{cornerforge::testing::scene(90, 70, 1), cornerforge::testing::scene(90, 70, 2)};
  const auto ts = extract_training_data(imgs, 9, 20, 256);
  EXPECT_LE(ts.size(), 2u * 84u * 64u);
  std::uint64_t total = 0;
  for (const auto& r : ts.records()) {
    EXPECT_EQ(r.corner, is_corner_config(RingConfig::from_packed(r.key[0]), 9));
    EXPECT_EQ(r.weight % 256, 0u);
    total += r.weight;
  }
  EXPECT_EQ(total, 256u * 2u * 84u * 64u);
}

TEST(LearnTree, ExhaustiveFast9IsExact) {
  RingTrainingSet empty;
  const RingTrainingSet all = augment_exhaustive(empty, 9);
  ASSERT_EQ(all.size(), RingConfig::kCount);
  std::uint64_t wrong_labels = 0;
  for (const auto& r : all.records())
    wrong_labels += r.corner != is_corner_config(RingConfig::from_packed(r.key[0]), 9);
  EXPECT_EQ(wrong_labels, 0u);

  const TernaryTree merged = build_tree(all, ring_offsets());
  const TernaryTree unmerged = build_tree(all, ring_offsets(), {.merge_identical = false});
  EXPECT_LE(merged.size(), unmerged.size());
  std::uint64_t mismatches = 0, merge_changes = 0;
  for (std::uint32_t code = 0; code < RingConfig::kCount; ++code) {
    const RingConfig cfg = RingConfig::from_code(code);
    const bool m = merged.classify(cfg);
    mismatches += m != is_corner_config(cfg, 9);
    merge_changes += m != unmerged.classify(cfg);
  }
  EXPECT_EQ(mismatches, 0u);
  EXPECT_EQ(merge_changes, 0u);
  EXPECT_EQ(merged, merge_identical_subtrees(unmerged));

  // Rebuilding is deterministic, also across worker counts.
  EXPECT_EQ(build_tree(all, ring_offsets(), {.jobs = 3}), merged);

  // Augmenting twice keeps labels and adds the low weight again.
  const RingTrainingSet twice = augment_exhaustive(all, 9, 2);
  ASSERT_EQ(twice.size(), all.size());
  for (std::size_t i = 0; i < all.size(); i += 4099) {
    EXPECT_EQ(twice.records()[i].corner, all.records()[i].corner);
    EXPECT_EQ(twice.records()[i].weight, all.records()[i].weight + 2);
  }
}

TEST(LearnTree, SharedSecondTestStillExact) {
  const TernaryTree& plain = cornerforge::testing::exact_tree(9);
  const RingTrainingSet all = augment_exhaustive(RingTrainingSet(), 9);
  const TernaryTree shared = force_shared_second_test(plain, all);
  ASSERT_TRUE(has_shared_second_test(shared));
  const int second = *shared_second_feature(shared);
  const int root = shared.nodes()[0].feature;
  EXPECT_NE(second, root);
  // The first two tests read exactly two fixed pixels.
  for (int s = 0; s < 3; ++s) {
    const auto& child = shared.nodes()[shared.nodes()[0].child[static_cast<std::size_t>(s)]];
    if (!child.is_leaf()) EXPECT_EQ(child.feature, second);
  }
  std::uint64_t mismatches = 0;
  for (std::uint32_t code = 0; code < RingConfig::kCount; ++code) {
    const RingConfig cfg = RingConfig::from_code(code);
    mismatches += shared.classify(cfg) != is_corner_config(cfg, 9);
  }
  EXPECT_EQ(mismatches, 0u);
  EXPECT_EQ(force_shared_second_test(shared, all), shared);
}

TEST(LearnTree, RealDataWithAugmentationIsExact) {
  const std::vector<GrayImage> imgs{cornerforge::testing::scene(120, 90, 40)};
  const auto ts = augment_exhaustive(extract_training_data(imgs, 12, 25, 256), 12, 1);
  const TernaryTree t = build_tree(ts, ring_offsets());
  std::uint64_t mismatches = 0;
  for (std::uint32_t code = 0; code < RingConfig::kCount; code += 7) {
    const RingConfig cfg = RingConfig::from_code(code);
    mismatches += t.classify(cfg) != is_corner_config(cfg, 12);
  }
  EXPECT_EQ(mismatches, 0u);
}
