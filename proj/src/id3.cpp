#include "cornerforge/id3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <unordered_map>

#include "cornerforge/error.hpp"

namespace cornerforge {

template <int Words>
BasicTrainingSet<Words>::BasicTrainingSet(int feature_count) : feature_count_(feature_count) {
  if (feature_count < 1 || feature_count > kMaxFeatures)
    throw PreconditionError("feature count " + std::to_string(feature_count) +
                            " outside 1.." + std::to_string(kMaxFeatures));
}

template <int Words>
void BasicTrainingSet<Words>::add(const Key& key, bool corner, std::uint32_t weight) {
  if (weight > kMaxWeight) throw DataError("record weight exceeds 2^31 - 1");
  records_.push_back({key, weight, corner});
}

template <int Words>
void BasicTrainingSet<Words>::consolidate() {
  std::ranges::sort(records_, [](const Record& a, const Record& b) { return a.key < b.key; });
  std::vector<Record> merged;
  merged.reserve(records_.size());
  for (const Record& r : records_) {
    if (!merged.empty() && merged.back().key == r.key) {
      if (merged.back().corner != r.corner)
        throw DataError("training set labels one configuration both corner and non-corner");
      const std::uint64_t w = std::uint64_t{merged.back().weight} + r.weight;
      if (w > kMaxWeight) throw DataError("record weight exceeds 2^31 - 1");
      merged.back().weight = static_cast<std::uint32_t>(w);
    } else {
      merged.push_back(r);
    }
  }
  records_ = std::move(merged);
}

template <int Words>
std::uint64_t BasicTrainingSet<Words>::corner_weight() const noexcept {
  std::uint64_t c = 0;
  for (const Record& r : records_) c += r.corner ? r.weight : 0;
  return c;
}

template <int Words>
std::uint64_t BasicTrainingSet<Words>::non_corner_weight() const noexcept {
  std::uint64_t c = 0;
  for (const Record& r : records_) c += r.corner ? 0 : r.weight;
  return c;
}

template class BasicTrainingSet<1>;
template class BasicTrainingSet<4>;

namespace {

double xlog2x(std::uint64_t v) {
  if (v == 0) return 0.0;
  const double d = static_cast<double>(v);
  return d * std::log2(d);
}

}  // namespace

double entropy(std::uint64_t c, std::uint64_t cbar) {
  return xlog2x(c + cbar) - xlog2x(c) - xlog2x(cbar);
}

double information_gain(const std::array<std::array<std::uint64_t, 2>, 3>& subsets) {
  std::uint64_t c = 0, cbar = 0;
  for (const auto& s : subsets) {
    cbar += s[0];
    c += s[1];
  }
  double gain = entropy(c, cbar);
  for (const auto& s : subsets) gain -= entropy(s[1], s[0]);
  return gain;
}

namespace {

// [state][label], label 1 = corner.
using StateCounts = std::array<std::array<std::uint64_t, 2>, 3>;

constexpr std::uint32_t kCornerBit = 0x80000000u;

template <int W>
struct PackedRecord {
  typename BasicTrainingSet<W>::Key key;
  std::uint32_t weight_label;  // bit 31: corner

  bool corner() const noexcept { return (weight_label & kCornerBit) != 0; }
  std::uint64_t weight() const noexcept { return weight_label & ~kCornerBit; }
};

template <int W>
std::vector<PackedRecord<W>> pack_records(const BasicTrainingSet<W>& ts) {
  std::vector<PackedRecord<W>> out;
  out.reserve(ts.size());
  for (const auto& r : ts.records())
    out.push_back({r.key, r.weight | (r.corner ? kCornerBit : 0u)});
  return out;
}

template <int W>
void count_states(std::span<const PackedRecord<W>> recs, int features,
                  std::vector<StateCounts>& counts) {
  counts.assign(static_cast<std::size_t>(features), StateCounts{});
  // Flat [feature][state][label] view for the hot loop.
  std::uint64_t* flat = counts.front()[0].data();
  for (const auto& r : recs) {
    const std::size_t label = r.corner() ? 1 : 0;
    const std::uint64_t w = r.weight();
    for (int word = 0; word < W; ++word) {
      std::uint32_t k = r.key[static_cast<std::size_t>(word)];
      const int fend = std::min(16, features - 16 * word);
      std::uint64_t* base = flat + static_cast<std::size_t>(16 * word) * 6 + label;
      if (fend == 16) {
        for (int j = 0; j < 16; ++j, k >>= 2) base[j * 6 + (k & 3u) * 2] += w;
      } else {
        for (int j = 0; j < fend; ++j, k >>= 2) base[j * 6 + (k & 3u) * 2] += w;
      }
    }
  }
}

int nonempty_parts(const StateCounts& c) {
  int n = 0;
  for (const auto& s : c) n += (s[0] + s[1]) > 0;
  return n;
}

// Argmax of `gains` with the tie tolerance, or -1 when all are ~0.
int pick_max_gain(const std::vector<double>& gains, double parent_entropy) {
  const double tol = kGainTieTolerance * std::max(1.0, parent_entropy);
  double best = -std::numeric_limits<double>::infinity();
  for (double g : gains) best = std::max(best, g);
  if (!(best > tol)) return -1;
  for (std::size_t f = 0; f < gains.size(); ++f)
    if (gains[f] >= best - tol) return static_cast<int>(f);
  return -1;
}

// Split choice for a single impure subset given its per-feature counts.
int choose_split(const std::vector<StateCounts>& counts, std::uint64_t c, std::uint64_t cbar) {
  const double h = entropy(c, cbar);
  std::vector<double> gains(counts.size());
  for (std::size_t f = 0; f < counts.size(); ++f) {
    gains[f] = information_gain(counts[f]);
    if (gains[f] < -kGainTieTolerance * std::max(1.0, h))
      throw Error("negative information gain; entropy accounting is broken");
  }
  if (const int f = pick_max_gain(gains, h); f >= 0) return f;
  for (std::size_t f = 0; f < counts.size(); ++f)
    if (nonempty_parts(counts[f]) >= 2) return static_cast<int>(f);
  throw DataError("no feature separates a mixed-label subset (inconsistent labels)");
}

// Dutch-flag partition on one feature: returns the starts of the similar and
// brighter blocks; darker occupies [lo, first).
template <int W>
std::pair<std::size_t, std::size_t> partition3(std::vector<PackedRecord<W>>& recs, std::size_t lo,
                                               std::size_t hi, int feature) {
  std::size_t lt = lo, i = lo, gt = hi;
  while (i < gt) {
    const auto s = BasicTrainingSet<W>::state(recs[i].key, feature);
    if (s == PixelState::darker) {
      std::swap(recs[lt++], recs[i++]);
    } else if (s == PixelState::brighter) {
      std::swap(recs[i], recs[--gt]);
    } else {
      ++i;
    }
  }
  return {lt, gt};
}

using Node = TernaryTree::Node;

constexpr std::array<PixelState, 3> kFileOrder = {PixelState::brighter, PixelState::similar,
                                                  PixelState::darker};

struct Range {
  std::size_t lo = 0, hi = 0;
  std::uint64_t c = 0, cbar = 0;
  bool pure() const { return c == 0 || cbar == 0; }
};

template <int W>
class Id3Builder {
 public:
  Id3Builder(std::vector<PackedRecord<W>>& recs, int features) : recs_(recs), features_(features) {}

  // Appends the subtree for `r` to `out` in canonical order; returns its index.
  std::uint32_t build(const Range& r, std::vector<Node>& out) const {
    const auto index = static_cast<std::uint32_t>(out.size());
    if (r.pure()) {
      Node leaf;
      leaf.leaf_class = r.c > 0 ? 1 : 0;
      out.push_back(leaf);
      return index;
    }
    std::vector<StateCounts> counts;
    count_states<W>(span(r), features_, counts);
    const int f = choose_split(counts, r.c, r.cbar);
    const auto children = split(r, f, counts[static_cast<std::size_t>(f)]);
    Node node;
    node.feature = f;
    out.push_back(node);
    for (PixelState s : kFileOrder) {
      const std::uint32_t child = build(children[static_cast<int>(s)], out);
      out[index].child[static_cast<int>(s)] = child;
    }
    return index;
  }

  std::array<Range, 3> split(const Range& r, int feature, const StateCounts& fc) const {
    const auto [m1, m2] = partition3<W>(recs_, r.lo, r.hi, feature);
    std::array<Range, 3> out;
    out[0] = {r.lo, m1, fc[0][1], fc[0][0]};
    out[1] = {m1, m2, fc[1][1], fc[1][0]};
    out[2] = {m2, r.hi, fc[2][1], fc[2][0]};
    return out;
  }

  std::span<const PackedRecord<W>> span(const Range& r) const {
    return {recs_.data() + r.lo, r.hi - r.lo};
  }

  int features() const { return features_; }

 private:
  std::vector<PackedRecord<W>>& recs_;
  int features_;
};

// Build the three children of a root node (possibly concurrently) and
// splice them after `root` in canonical order.
template <class ChildFn>
std::vector<Node> assemble_root(Node root, ChildFn&& build_child, int jobs) {
  std::array<std::vector<Node>, 3> parts;  // file order b, s, d
  if (jobs > 1) {
    std::vector<std::thread> workers;
    for (int i = 0; i < 3; ++i)
      workers.emplace_back([&, i] { build_child(kFileOrder[static_cast<std::size_t>(i)], parts[static_cast<std::size_t>(i)]); });
    for (auto& w : workers) w.join();
  } else {
    for (int i = 0; i < 3; ++i) build_child(kFileOrder[static_cast<std::size_t>(i)], parts[static_cast<std::size_t>(i)]);
  }
  std::vector<Node> out{root};
  for (int i = 0; i < 3; ++i) {
    const auto base = static_cast<std::uint32_t>(out.size());
    out[0].child[static_cast<int>(kFileOrder[static_cast<std::size_t>(i)])] = base;
    for (Node n : parts[static_cast<std::size_t>(i)]) {
      if (!n.is_leaf())
        for (auto& c : n.child) c += base;
      out.push_back(n);
    }
  }
  return out;
}

template <int W>
void check_dimensions(const BasicTrainingSet<W>& ts, const OffsetTable& offsets) {
  if (static_cast<int>(offsets.size()) != ts.feature_count())
    throw PreconditionError("offset table has " + std::to_string(offsets.size()) +
                            " entries but the training set has " +
                            std::to_string(ts.feature_count()) + " features");
}

}  // namespace

template <int W>
int best_split(const BasicTrainingSet<W>& ts) {
  const std::uint64_t c = ts.corner_weight(), cbar = ts.non_corner_weight();
  if (entropy(c, cbar) == 0.0) throw PreconditionError("best_split on a zero-entropy set");
  const auto recs = pack_records(ts);
  std::vector<StateCounts> counts;
  count_states<W>(std::span(recs), ts.feature_count(), counts);
  return choose_split(counts, c, cbar);
}

template <int W>
TernaryTree build_tree(const BasicTrainingSet<W>& ts, const OffsetTable& offsets,
                       const BuildOptions& options) {
  check_dimensions(ts, offsets);
  auto recs = pack_records(ts);
  Id3Builder<W> builder(recs, ts.feature_count());
  const Range all{0, recs.size(), ts.corner_weight(), ts.non_corner_weight()};
  if (all.pure()) return TernaryTree::leaf(all.c > 0, offsets);

  std::vector<StateCounts> counts;
  count_states<W>(builder.span(all), builder.features(), counts);
  const int root_feature = choose_split(counts, all.c, all.cbar);
  const auto children = builder.split(all, root_feature, counts[static_cast<std::size_t>(root_feature)]);
  Node root;
  root.feature = root_feature;

  std::vector<Node> nodes;
  if (!options.shared_second_test) {
    nodes = assemble_root(
        root,
        [&](PixelState s, std::vector<Node>& out) { builder.build(children[static_cast<int>(s)], out); },
        options.jobs);
  } else {
    // Pick the second feature by summed gain over the impure subsets.
    std::array<std::vector<StateCounts>, 3> child_counts;
    std::vector<double> gains(static_cast<std::size_t>(builder.features()), 0.0);
    double entropy_sum = 0.0;
    for (int s = 0; s < 3; ++s) {
      const Range& r = children[static_cast<std::size_t>(s)];
      if (r.pure()) continue;
      count_states<W>(builder.span(r), builder.features(), child_counts[static_cast<std::size_t>(s)]);
      entropy_sum += entropy(r.c, r.cbar);
      for (int f = 0; f < builder.features(); ++f)
        gains[static_cast<std::size_t>(f)] +=
            information_gain(child_counts[static_cast<std::size_t>(s)][static_cast<std::size_t>(f)]);
    }
    gains[static_cast<std::size_t>(root_feature)] = 0.0;
    int second = pick_max_gain(gains, entropy_sum);
    if (second < 0) {
      for (int f = 0; f < builder.features() && second < 0; ++f) {
        if (f == root_feature) continue;
        for (int s = 0; s < 3; ++s)
          if (!child_counts[static_cast<std::size_t>(s)].empty() &&
              nonempty_parts(child_counts[static_cast<std::size_t>(s)][static_cast<std::size_t>(f)]) >= 2) {
            second = f;
            break;
          }
      }
    }
    nodes = assemble_root(
        root,
        [&](PixelState s, std::vector<Node>& out) {
          const Range& r = children[static_cast<int>(s)];
          if (r.pure() || second < 0) {
            builder.build(r, out);
            return;
          }
          const auto& fc = child_counts[static_cast<int>(s)][static_cast<std::size_t>(second)];
          const auto grand = builder.split(r, second, fc);
          Node n;
          n.feature = second;
          out.push_back(n);
          for (PixelState g : kFileOrder) {
            const std::uint32_t child = builder.build(grand[static_cast<int>(g)], out);
            out[0].child[static_cast<int>(g)] = child;
          }
        },
        options.jobs);
  }
  TernaryTree tree(offsets, std::move(nodes));
  if (options.merge_identical) tree = merge_identical_subtrees(tree, options.shared_second_test);
  return tree;
}

TernaryTree merge_identical_subtrees(const TernaryTree& tree, bool keep_second_level) {
  const auto& nodes = tree.nodes();
  // Interned subtree shapes; ids 0 and 1 are the two leaves.
  using Shape = std::array<std::int64_t, 4>;  // feature, b, s, d ids
  std::map<Shape, std::int64_t> intern;
  std::vector<Shape> shapes;
  std::vector<std::int64_t> id(nodes.size());
  std::vector<bool> below_root(nodes.size(), false);
  if (!nodes[0].is_leaf())
    for (auto c : nodes[0].child) below_root[c] = true;

  for (std::size_t k = nodes.size(); k-- > 0;) {
    const Node& n = nodes[k];
    if (n.is_leaf()) {
      id[k] = n.leaf_class;
      continue;
    }
    const std::int64_t b = id[n.branch(PixelState::brighter)];
    const std::int64_t s = id[n.branch(PixelState::similar)];
    const std::int64_t d = id[n.branch(PixelState::darker)];
    if (b == s && s == d && !(keep_second_level && below_root[k])) {
      id[k] = b;
      continue;
    }
    const Shape shape{n.feature, b, s, d};
    auto [it, inserted] = intern.try_emplace(shape, static_cast<std::int64_t>(shapes.size()) + 2);
    if (inserted) shapes.push_back(shape);
    id[k] = it->second;
  }

  std::vector<Node> out;
  auto expand = [&](auto&& self, std::int64_t sid) -> std::uint32_t {
    const auto index = static_cast<std::uint32_t>(out.size());
    if (sid < 2) {
      Node leaf;
      leaf.leaf_class = static_cast<std::uint8_t>(sid);
      out.push_back(leaf);
      return index;
    }
    const Shape shape = shapes[static_cast<std::size_t>(sid - 2)];
    Node n;
    n.feature = static_cast<std::int32_t>(shape[0]);
    out.push_back(n);
    for (int i = 0; i < 3; ++i) {
      const std::uint32_t c = self(self, shape[static_cast<std::size_t>(i + 1)]);
      out[index].child[static_cast<int>(kFileOrder[static_cast<std::size_t>(i)])] = c;
    }
    return index;
  };
  expand(expand, id[0]);
  return TernaryTree(tree.offsets(), std::move(out));
}

std::optional<int> shared_second_feature(const TernaryTree& tree) {
  if (tree.is_leaf_tree()) return std::nullopt;
  std::optional<int> feature;
  for (auto c : tree.at(0).child) {
    const auto& n = tree.at(c);
    if (n.is_leaf()) continue;
    if (feature && *feature != n.feature) return std::nullopt;
    feature = n.feature;
  }
  return feature;
}

bool has_shared_second_test(const TernaryTree& tree) {
  if (tree.is_leaf_tree()) return false;
  const auto& root = tree.at(0);
  const bool any_internal =
      std::ranges::any_of(root.child, [&](std::uint32_t c) { return !tree.at(c).is_leaf(); });
  return !any_internal || shared_second_feature(tree).has_value();
}

template <int W>
TernaryTree force_shared_second_test(const TernaryTree& tree, const BasicTrainingSet<W>& ts,
                                     const BuildOptions& options) {
  if (tree.depth() < 2 || has_shared_second_test(tree)) return tree;
  BuildOptions shared = options;
  shared.shared_second_test = true;
  return build_tree(ts, tree.offsets(), shared);
}

RingTrainingSet extract_training_data(std::span<const GrayImage> images, int n, int threshold,
                                      std::uint32_t weight_scale) {
  if (images.empty()) throw PreconditionError("extract_training_data needs at least one image");
  if (weight_scale < 1) throw PreconditionError("weight scale must be >= 1");
  std::unordered_map<std::uint32_t, std::uint64_t> counts;
  for (const GrayImage& img : images)
    for (int y = 3; y < img.height() - 3; ++y)
      for (int x = 3; x < img.width() - 3; ++x) ++counts[ring_config(img, {x, y}, threshold).packed()];

  std::vector<std::pair<std::uint32_t, std::uint64_t>> sorted(counts.begin(), counts.end());
  std::ranges::sort(sorted);
  RingTrainingSet ts(kRingSize);
  ts.reserve(sorted.size());
  for (const auto& [packed, count] : sorted) {
    const std::uint64_t w = count * weight_scale;
    if (w > RingTrainingSet::kMaxWeight) throw DataError("record weight exceeds 2^31 - 1");
    ts.add({packed}, is_corner_config(RingConfig::from_packed(packed), n),
           static_cast<std::uint32_t>(w));
  }
  return ts;
}

RingTrainingSet augment_exhaustive(const RingTrainingSet& ts, int n, std::uint32_t low_weight) {
  if (low_weight < 1) throw PreconditionError("augmentation weight must be >= 1");
  if (ts.feature_count() != kRingSize) throw PreconditionError("augmentation needs a 16-slot ring set");

  struct Entry {
    std::uint32_t packed;
    std::uint64_t weight;
    bool corner;
  };
  std::vector<Entry> all(RingConfig::kCount);
  {
    std::array<std::uint32_t, kRingSize> digit{};
    std::uint32_t packed = 0;
    for (std::uint32_t code = 0; code < RingConfig::kCount; ++code) {
      all[code] = {packed, low_weight, is_corner_config(RingConfig::from_packed(packed), n)};
      // Odometer increment in base 3, least significant slot first.
      for (int i = 0; i < kRingSize; ++i) {
        if (digit[static_cast<std::size_t>(i)] < 2) {
          ++digit[static_cast<std::size_t>(i)];
          packed += 1u << (2 * i);
          break;
        }
        digit[static_cast<std::size_t>(i)] = 0;
        packed &= ~(3u << (2 * i));
      }
    }
  }
  for (const auto& r : ts.records()) {
    Entry& e = all[RingConfig::from_packed(r.key[0]).code()];
    if (e.corner != r.corner)
      throw DataError("training record label disagrees with the segment test");
    e.weight += r.weight;
  }
  RingTrainingSet out(kRingSize);
  out.reserve(all.size());
  for (const Entry& e : all) {
    if (e.weight > RingTrainingSet::kMaxWeight) throw DataError("record weight exceeds 2^31 - 1");
    out.add({e.packed}, e.corner, static_cast<std::uint32_t>(e.weight));
  }
  return out;
}

TernaryTree learn_segment_test_tree(int n, const BuildOptions& options) {
  return build_tree(augment_exhaustive(RingTrainingSet(kRingSize), n, 1), ring_offsets(), options);
}

template int best_split(const BasicTrainingSet<1>&);
template int best_split(const BasicTrainingSet<4>&);
template TernaryTree build_tree(const BasicTrainingSet<1>&, const OffsetTable&, const BuildOptions&);
template TernaryTree build_tree(const BasicTrainingSet<4>&, const OffsetTable&, const BuildOptions&);
template TernaryTree force_shared_second_test(const TernaryTree&, const BasicTrainingSet<1>&,
                                              const BuildOptions&);
template TernaryTree force_shared_second_test(const TernaryTree&, const BasicTrainingSet<4>&,
                                              const BuildOptions&);

}  // namespace cornerforge
