#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cornerforge/offsets.hpp"
#include "cornerforge/segment_test.hpp"

namespace cornerforge {

/// Decision tree whose internal nodes compare one offset pixel against the
/// nucleus and branch three ways on the resulting PixelState.
///
/// Nodes live in a flat array in canonical pre-order (node, brighter
/// subtree, similar subtree, darker subtree) with the root at index 0, so
/// two trees are structurally equal exactly when their arrays are equal.
class TernaryTree {
 public:
  struct Node {
    /// Slot in the offset table; -1 marks a leaf.
    std::int32_t feature = -1;
    std::uint8_t leaf_class = 0;
    /// Child node indices, indexed by PixelState.
    std::array<std::uint32_t, 3> child{};

    bool is_leaf() const noexcept { return feature < 0; }
    std::uint32_t branch(PixelState s) const noexcept { return child[static_cast<int>(s)]; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  struct ParentLink {
    std::int32_t parent = -1;  // -1 for the root
    PixelState branch = PixelState::similar;
  };

  TernaryTree() : TernaryTree(leaf(false, ring_offsets())) {}
  /// Validates indices and features, then re-lays the nodes out canonically.
  /// `nodes[0]` is the root and every other node must be referenced exactly once.
  TernaryTree(OffsetTable offsets, std::vector<Node> nodes);

  static TernaryTree leaf(bool corner, OffsetTable offsets);
  /// Decision node on `feature`; children given in file order b, s, d.
  static TernaryTree node(int feature, const TernaryTree& brighter, const TernaryTree& similar,
                          const TernaryTree& darker);

  const OffsetTable& offsets() const noexcept { return offsets_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& at(std::size_t i) const { return nodes_.at(i); }

  /// Number of decision (non-leaf) nodes.
  std::size_t size() const noexcept;
  std::size_t node_count() const noexcept { return nodes_.size(); }
  /// Decision nodes on the longest root-to-leaf path.
  int depth() const;
  bool is_leaf_tree() const noexcept { return nodes_.front().is_leaf(); }

  /// Walk from the root; state_of(feature) supplies each tested state.
  template <class StateFn>
  bool evaluate(StateFn&& state_of) const {
    const Node* n = nodes_.data();
    while (!n->is_leaf()) n = nodes_.data() + n->branch(state_of(n->feature));
    return n->leaf_class != 0;
  }

  /// Classify a ring configuration; valid for trees over the 16 ring slots.
  bool classify(RingConfig cfg) const {
    return evaluate([cfg](int f) { return cfg.state(f); });
  }

  std::vector<ParentLink> parents() const;
  TernaryTree subtree(std::size_t index) const;
  TernaryTree replace_subtree(std::size_t index, const TernaryTree& replacement) const;
  TernaryTree with_feature(std::size_t index, int feature) const;
  TernaryTree with_leaf_class(std::size_t index, bool corner) const;

  friend bool operator==(const TernaryTree&, const TernaryTree&) = default;

 private:
  struct Canonical {};
  TernaryTree(Canonical, OffsetTable offsets, std::vector<Node> nodes)
      : offsets_(std::move(offsets)), nodes_(std::move(nodes)) {}

  void copy_subtree_into(std::size_t index, std::vector<Node>& out) const;

  OffsetTable offsets_;
  std::vector<Node> nodes_;
};

/// Line format, LF endings, one node per line in pre-order:
///   FASTTREE v1 offsets=<count>
///   O <idx> <dx> <dy>        (only for non-ring tables)
///   N <offset_index>         followed by the b, s, d subtrees
///   L <0|1>
/// Ring trees write 1-based ring indices; other tables write 0-based slots.
/// Lines starting with '#' before the header are ignored on input.
std::string serialize_tree(const TernaryTree& tree);
TernaryTree deserialize_tree(const std::string& text);

}  // namespace cornerforge
