#pragma once

// FAST-ER: ternary trees over a wider patch, optimised for repeatability by
// simulated annealing, applied under the eight grid symmetries with and
// without intensity inversion, then distilled into one plain tree.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cornerforge/detector.hpp"
#include "cornerforge/id3.hpp"
#include "cornerforge/image.hpp"
#include "cornerforge/offsets.hpp"
#include "cornerforge/repeatability.hpp"
#include "cornerforge/ternary_tree.hpp"

namespace cornerforge {

/// The 48 cells of the 7x7 neighbourhood minus its centre, raster order.
OffsetTable default_faster_offsets();
/// Moves (-1, 4) to slot 0 when the table contains it, keeping the relative
/// order of the other entries. Throws DataError on duplicate offsets.
OffsetTable normalize_faster_offsets(OffsetTable table);
/// One "dx dy" pair per line; '#' starts a comment.
OffsetTable parse_offset_table(const std::string& text);
/// The table followed by every symmetric image of its entries not already
/// present.
OffsetTable symmetric_closure(const OffsetTable& table);

/// True when every leaf reached through the similar branch of its parent is
/// a non-corner leaf.
bool satisfies_s_leaf_constraint(const TernaryTree& tree);

/// A TernaryTree that satisfies the s-leaf constraint.
class FasterTree {
 public:
  /// A single non-corner leaf over the default offsets.
  FasterTree() : tree_(TernaryTree::leaf(false, default_faster_offsets())) {}
  /// Throws DataError when the constraint is violated.
  explicit FasterTree(TernaryTree tree);

  const TernaryTree& tree() const noexcept { return tree_; }
  const OffsetTable& offsets() const noexcept { return tree_.offsets(); }
  std::size_t size() const noexcept { return tree_.size(); }
  friend bool operator==(const FasterTree&, const FasterTree&) = default;

 private:
  TernaryTree tree_;
};

std::string serialize_faster_tree(const FasterTree& tree);
/// Parses the tree format and checks the constraint.
FasterTree deserialize_faster_tree(const std::string& text);

/// The tree compiled under all sixteen transforms for one image stride.
class SixteenFold {
 public:
  SixteenFold(const TernaryTree& tree, std::ptrdiff_t stride);

  bool classify(const std::uint8_t* p, int threshold) const {
    for (const auto& c : variants_)
      if (c.classify(p, threshold)) return true;
    return false;
  }
  const std::vector<CompiledTree>& variants() const noexcept { return variants_; }
  /// Pointer offsets of every pixel any variant can read.
  const std::vector<std::ptrdiff_t>& deltas() const noexcept { return deltas_; }

 private:
  std::vector<CompiledTree> variants_;
  std::vector<std::ptrdiff_t> deltas_;
};

/// Interior pixels (margin = offset radius) where any of the sixteen
/// applications fires, raster order.
std::vector<Point> detect_sixteenfold(const TernaryTree& tree, const GrayImage& img, int threshold,
                                      int jobs = 1);
/// Per-pixel flags, row-major; border pixels are false.
std::vector<std::uint8_t> apply_sixteenfold(const TernaryTree& tree, const GrayImage& img, int threshold,
                                            int jobs = 1);
/// Largest t in [1, 255] at which p fires. Exact without assuming that
/// firing is monotone in t; throws NotACornerError when p never fires.
int sixteenfold_score(const SixteenFold& detector, const GrayImage& img, Point p);

struct CostWeights {
  double wr = 1.0;
  double wn = 3500.0;
  double ws = 10000.0;
};

/// (1 + (wr/r)^2) (1 + mean((d_i/wn)^2)) (1 + (s/ws)^2); +inf when r = 0.
double faster_cost(double repeatability, std::span<const double> corners_per_frame, std::size_t tree_size,
                   const CostWeights& weights = {});

/// beta exp(-alpha I / I_max).
double anneal_temperature(long long iteration, long long max_iterations, double alpha, double beta);
/// min(1, exp((previous - proposed) / T)); a move between two infinite
/// costs is always accepted.
double acceptance_probability(double previous, double proposed, double temperature);

enum class MutationKind {
  grow,
  flip,
  randomize_offset,
  collapse,
  copy_branch,
};
inline constexpr int kMutationKinds = 5;
std::string to_string(MutationKind kind);

struct Mutation {
  TernaryTree tree;
  MutationKind kind;
  std::size_t node = 0;  // pre-order index of the mutated node
};

/// A depth-1 tree: one random-offset node, random b and d leaves, s leaf 0.
TernaryTree random_depth1_tree(const OffsetTable& offsets, std::mt19937_64& rng);

/// Pick a uniformly random node and mutate it. When `forced` names a kind
/// that is not available for the chosen node the ordinary choice is made.
Mutation mutate(const TernaryTree& tree, std::mt19937_64& rng, std::optional<MutationKind> forced = {});

struct AnnealOptions {
  CostWeights weights;
  double alpha = 30.0;
  double beta = 100.0;
  int threshold = 35;
  long long max_iterations = 100000;
  int runs = 100;
  double epsilon = kDefaultEpsilon;
  std::uint64_t seed = 1;
  OffsetTable offsets = default_faster_offsets();
  int jobs = 1;
};

struct TrainingScore {
  double cost = std::numeric_limits<double>::infinity();
  std::optional<double> repeatability;
  std::vector<double> corners_per_frame;
};

/// Detects at the fixed threshold with all sixteen transforms (before
/// suppression) and scores the tree.
TrainingScore evaluate_tree(const TernaryTree& tree, const Sequence& training, const AnnealOptions& options);

struct TraceRow {
  long long iteration = 0;
  double cost = 0.0;
  double best_cost = 0.0;
  double temperature = 0.0;
};

struct AnnealResult {
  FasterTree best;
  double best_cost = std::numeric_limits<double>::infinity();
  double initial_cost = std::numeric_limits<double>::infinity();
  std::vector<TraceRow> trace;
  std::array<long long, kMutationKinds> mutation_counts{};
  /// True when every proposed tree met the s-leaf constraint.
  bool constraint_held = true;
  std::uint64_t seed = 0;
};

/// Metropolis search from a random depth-1 tree; deterministic for a seed.
AnnealResult anneal(const Sequence& training, const AnnealOptions& options, std::uint64_t seed);

struct MultiRunResult {
  std::vector<AnnealResult> runs;
  std::size_t best_run = 0;
  double min_cost = 0.0, median_cost = 0.0, max_cost = 0.0;
  const AnnealResult& best() const { return runs.at(best_run); }
};

/// `options.runs` independent anneals with per-run seeds derived from
/// options.seed (run 0 uses options.seed itself).
MultiRunResult multi_run(const Sequence& training, const AnnealOptions& options);

/// "iteration,cost,best_cost,temperature".
std::string format_trace_csv(std::span<const TraceRow> trace);

struct DistillOptions {
  int threshold = 35;
  BuildOptions build;
};

/// Label every interior pixel of `images` with the sixteen-fold detector,
/// key it by the states of the symmetric closure of the tree's offsets and
/// learn one tree from the result with ID3.
TernaryTree distill(const FasterTree& tree, std::span<const GrayImage> images, const DistillOptions& options = {});

/// Fraction of pixels, inside the larger of the two margins, on which the
/// two detectors agree at `threshold`.
double distill_agreement(const TernaryTree& distilled, const FasterTree& tree, const GrayImage& img, int threshold,
                         int jobs = 1);

}  // namespace cornerforge
