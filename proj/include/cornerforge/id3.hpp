#pragma once

// ID3 compilation of a labelled ternary dataset into a TernaryTree.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cornerforge/image.hpp"
#include "cornerforge/segment_test.hpp"
#include "cornerforge/ternary_tree.hpp"

namespace cornerforge {

/// Weighted, labelled ternary feature vectors. Keys pack sixteen two-bit
/// PixelStates per 32-bit word, so a set holds up to 16 * Words features.
template <int Words>
class BasicTrainingSet {
 public:
  static constexpr int kMaxFeatures = 16 * Words;
  using Key = std::array<std::uint32_t, Words>;
  /// Weights are multiplicities; at most 2^31 - 1 per record.
  static constexpr std::uint32_t kMaxWeight = 0x7FFFFFFFu;

  struct Record {
    Key key{};
    std::uint32_t weight = 0;
    bool corner = false;
  };

  explicit BasicTrainingSet(int feature_count = kMaxFeatures);

  int feature_count() const noexcept { return feature_count_; }
  const std::vector<Record>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  void reserve(std::size_t n) { records_.reserve(n); }

  /// Appends without merging; call consolidate() when keys may repeat.
  void add(const Key& key, bool corner, std::uint32_t weight);
  /// Merge records with equal keys, summing weights. Sorts by key. Throws
  /// DataError when one key carries both labels.
  void consolidate();

  /// Summed weight of corner (c) and non-corner (cbar) records.
  std::uint64_t corner_weight() const noexcept;
  std::uint64_t non_corner_weight() const noexcept;

  static PixelState state(const Key& key, int feature) noexcept {
    return static_cast<PixelState>((key[static_cast<std::size_t>(feature / 16)] >>
                                    (2 * (feature % 16))) & 3u);
  }
  static void set_state(Key& key, int feature, PixelState s) noexcept {
    auto& word = key[static_cast<std::size_t>(feature / 16)];
    const int shift = 2 * (feature % 16);
    word = (word & ~(3u << shift)) | (static_cast<std::uint32_t>(s) << shift);
  }

 private:
  int feature_count_;
  std::vector<Record> records_;
};

using RingTrainingSet = BasicTrainingSet<1>;
/// Up to 64 offsets; FAST-ER distillation uses 48.
using PatchTrainingSet = BasicTrainingSet<4>;

inline RingTrainingSet::Key ring_key(RingConfig cfg) { return {cfg.packed()}; }

/// Total (un-normalised) entropy of a set with c corners and cbar
/// non-corners, in weighted-count bits:
///   (c + cbar) log2(c + cbar) - c log2 c - cbar log2 cbar, 0 log 0 = 0.
double entropy(std::uint64_t c, std::uint64_t cbar);

/// Information gain of partitioning a set into three subsets given each
/// subset's (corner, non-corner) weights, indexed by PixelState.
double information_gain(const std::array<std::array<std::uint64_t, 2>, 3>& subsets);

/// Gains within this relative distance of the best (scaled by max(1, H(P)))
/// count as ties and go to the lowest feature index.
inline constexpr double kGainTieTolerance = 1e-12;

/// Feature with the largest information gain, lowest index among ties.
/// When every gain is zero, the lowest feature that splits the set into at
/// least two non-empty parts. Throws PreconditionError for a set with zero
/// entropy and DataError when no feature separates the records.
template <int W>
int best_split(const BasicTrainingSet<W>& ts);

struct BuildOptions {
  /// Collapse nodes whose three subtrees are identical.
  bool merge_identical = true;
  /// Constrain every second-level node to test one common feature.
  bool shared_second_test = false;
  /// Workers for the three subtrees of the root; output does not depend on it.
  int jobs = 1;
};

/// Recursive ID3 until every subset has zero entropy. An empty subset
/// becomes a non-corner leaf. `offsets` must have ts.feature_count() entries.
template <int W>
TernaryTree build_tree(const BasicTrainingSet<W>& ts, const OffsetTable& offsets,
                       const BuildOptions& options = {});

/// Bottom-up structural merge: a node whose three children are identical
/// subtrees is replaced by that subtree. With `keep_second_level`, children
/// of the root are never collapsed.
TernaryTree merge_identical_subtrees(const TernaryTree& tree, bool keep_second_level = false);

/// Feature shared by all decision nodes directly below the root, if any.
std::optional<int> shared_second_feature(const TernaryTree& tree);
bool has_shared_second_test(const TernaryTree& tree);

/// Returns `tree` unchanged when its second tests already agree, else
/// rebuilds from `ts` with the second-level feature pinned to the single
/// feature of largest summed gain across the root's subsets.
template <int W>
TernaryTree force_shared_second_test(const TernaryTree& tree, const BasicTrainingSet<W>& ts,
                                     const BuildOptions& options = {});

/// One weighted record per distinct ring configuration found on interior
/// pixels, labelled by the FAST-n segment test at threshold t. Weights are
/// occurrence counts times `weight_scale`.
RingTrainingSet extract_training_data(std::span<const GrayImage> images, int n, int threshold,
                                      std::uint32_t weight_scale = 1);

/// Add every one of the 3^16 ring configurations with weight `low_weight`
/// and its segment-test label. Existing weights are kept and summed; a
/// record whose label disagrees with the segment test raises DataError.
RingTrainingSet augment_exhaustive(const RingTrainingSet& ts, int n, std::uint32_t low_weight = 1);

/// ID3 tree that reproduces FAST-n on every ring configuration.
TernaryTree learn_segment_test_tree(int n, const BuildOptions& options = {});

extern template class BasicTrainingSet<1>;
extern template class BasicTrainingSet<4>;

}  // namespace cornerforge
