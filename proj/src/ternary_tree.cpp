#include "cornerforge/ternary_tree.hpp"

#include <algorithm>
#include <sstream>

#include "cornerforge/error.hpp"

namespace cornerforge {
namespace {

constexpr std::array<PixelState, 3> kFileOrder = {PixelState::brighter, PixelState::similar,
                                                  PixelState::darker};

// Copy the subtree rooted at `index` of `src` into `out` in canonical order.
void relayout(const std::vector<TernaryTree::Node>& src, std::size_t index,
              std::vector<TernaryTree::Node>& out) {
  const std::size_t here = out.size();
  out.push_back(src[index]);
  if (src[index].is_leaf()) {
    out[here].child = {};
    return;
  }
  for (PixelState s : kFileOrder) {
    const std::uint32_t child = static_cast<std::uint32_t>(out.size());
    relayout(src, src[index].branch(s), out);
    out[here].child[static_cast<int>(s)] = child;
  }
}

}  // namespace

TernaryTree::TernaryTree(OffsetTable offsets, std::vector<Node> nodes) {
  if (nodes.empty()) throw DataError("tree has no nodes");
  if (offsets.empty()) throw DataError("tree offset table is empty");
  std::vector<int> refs(nodes.size(), 0);
  for (const Node& n : nodes) {
    if (n.is_leaf()) {
      if (n.leaf_class > 1) throw DataError("leaf class must be 0 or 1");
      continue;
    }
    if (n.feature >= static_cast<std::int32_t>(offsets.size()))
      throw DataError("node offset index " + std::to_string(n.feature) + " out of range");
    for (std::uint32_t c : n.child) {
      if (c == 0 || c >= nodes.size()) throw DataError("child index out of range");
      ++refs[c];
    }
  }
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (refs[i] != 1) throw DataError("tree nodes must each have exactly one parent");
  // A node reachable from itself would have been counted twice or left the
  // root unreachable; relayout visits each node once.
  std::vector<Node> canonical;
  canonical.reserve(nodes.size());
  relayout(nodes, 0, canonical);
  if (canonical.size() != nodes.size()) throw DataError("tree contains unreachable nodes");
  offsets_ = std::move(offsets);
  nodes_ = std::move(canonical);
}

TernaryTree TernaryTree::leaf(bool corner, OffsetTable offsets) {
  Node n;
  n.leaf_class = corner ? 1 : 0;
  return TernaryTree(Canonical{}, std::move(offsets), {n});
}

TernaryTree TernaryTree::node(int feature, const TernaryTree& brighter, const TernaryTree& similar,
                              const TernaryTree& darker) {
  if (brighter.offsets_ != similar.offsets_ || brighter.offsets_ != darker.offsets_)
    throw PreconditionError("subtrees use different offset tables");
  if (feature < 0 || feature >= static_cast<int>(brighter.offsets_.size()))
    throw PreconditionError("feature out of range");
  std::vector<Node> nodes(1);
  nodes[0].feature = feature;
  for (auto [state, sub] : {std::pair{PixelState::brighter, &brighter},
                            std::pair{PixelState::similar, &similar},
                            std::pair{PixelState::darker, &darker}}) {
    const auto base = static_cast<std::uint32_t>(nodes.size());
    nodes[0].child[static_cast<int>(state)] = base;
    for (Node n : sub->nodes_) {
      if (!n.is_leaf())
        for (auto& c : n.child) c += base;
      nodes.push_back(n);
    }
  }
  return TernaryTree(Canonical{}, brighter.offsets_, std::move(nodes));
}

std::size_t TernaryTree::size() const noexcept {
  return static_cast<std::size_t>(
      std::ranges::count_if(nodes_, [](const Node& n) { return !n.is_leaf(); }));
}

int TernaryTree::depth() const {
  // Canonical pre-order: parents precede children.
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_leaf()) {
      best = std::max(best, d[i]);
      continue;
    }
    for (auto c : nodes_[i].child) d[c] = d[i] + 1;
  }
  return best;
}

std::vector<TernaryTree::ParentLink> TernaryTree::parents() const {
  std::vector<ParentLink> links(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_leaf()) continue;
    for (int s = 0; s < 3; ++s)
      links[nodes_[i].child[static_cast<std::size_t>(s)]] = {static_cast<std::int32_t>(i),
                                                             static_cast<PixelState>(s)};
  }
  return links;
}

void TernaryTree::copy_subtree_into(std::size_t index, std::vector<Node>& out) const {
  relayout(nodes_, index, out);
}

TernaryTree TernaryTree::subtree(std::size_t index) const {
  if (index >= nodes_.size()) throw PreconditionError("node index out of range");
  std::vector<Node> out;
  copy_subtree_into(index, out);
  return TernaryTree(Canonical{}, offsets_, std::move(out));
}

TernaryTree TernaryTree::replace_subtree(std::size_t index, const TernaryTree& replacement) const {
  if (index >= nodes_.size()) throw PreconditionError("node index out of range");
  if (replacement.offsets_ != offsets_) throw PreconditionError("replacement uses another offset table");
  if (index == 0) return replacement;
  // Rebuild, splicing the replacement's nodes where `index` used to be.
  std::vector<Node> out;
  out.reserve(nodes_.size() + replacement.nodes_.size());
  auto emit = [&](auto&& self, std::size_t i) -> void {
    if (i == index) {
      const auto base = static_cast<std::uint32_t>(out.size());
      for (Node n : replacement.nodes_) {
        if (!n.is_leaf())
          for (auto& c : n.child) c += base;
        out.push_back(n);
      }
      return;
    }
    const std::size_t here = out.size();
    out.push_back(nodes_[i]);
    if (nodes_[i].is_leaf()) return;
    for (PixelState s : kFileOrder) {
      const auto c = static_cast<std::uint32_t>(out.size());
      self(self, nodes_[i].branch(s));
      out[here].child[static_cast<int>(s)] = c;
    }
  };
  emit(emit, 0);
  return TernaryTree(Canonical{}, offsets_, std::move(out));
}

TernaryTree TernaryTree::with_feature(std::size_t index, int feature) const {
  if (index >= nodes_.size() || nodes_[index].is_leaf())
    throw PreconditionError("with_feature needs a decision node");
  if (feature < 0 || feature >= static_cast<int>(offsets_.size()))
    throw PreconditionError("feature out of range");
  TernaryTree t = *this;
  t.nodes_[index].feature = feature;
  return t;
}

TernaryTree TernaryTree::with_leaf_class(std::size_t index, bool corner) const {
  if (index >= nodes_.size() || !nodes_[index].is_leaf())
    throw PreconditionError("with_leaf_class needs a leaf");
  TernaryTree t = *this;
  t.nodes_[index].leaf_class = corner ? 1 : 0;
  return t;
}

std::string serialize_tree(const TernaryTree& tree) {
  const bool ring = is_ring_table(tree.offsets());
  std::ostringstream out;
  out << "FASTTREE v1 offsets=" << tree.offsets().size() << '\n';
  if (!ring)
    for (std::size_t i = 0; i < tree.offsets().size(); ++i)
      out << "O " << i << ' ' << tree.offsets()[i].dx << ' ' << tree.offsets()[i].dy << '\n';
  // Canonical layout is already pre-order b, s, d.
  for (const auto& n : tree.nodes()) {
    if (n.is_leaf())
      out << "L " << static_cast<int>(n.leaf_class) << '\n';
    else
      out << "N " << (ring ? n.feature + 1 : n.feature) << '\n';
  }
  return out.str();
}

namespace {

bool parse_int(const std::string& s, long& value) {
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9') return false;
  if (s.size() > 10) return false;
  value = std::stol(s);
  return true;
}

std::vector<std::string> split_spaces(const std::string& line) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t sp = line.find(' ', start);
    parts.push_back(line.substr(start, sp - start));
    if (sp == std::string::npos) break;
    start = sp + 1;
  }
  return parts;
}

}  // namespace

TernaryTree deserialize_tree(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t nl = text.find('\n', start);
      if (nl == std::string::npos) nl = text.size();
      lines.push_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }
  std::size_t li = 0;
  while (li < lines.size() && !lines[li].empty() && lines[li][0] == '#') ++li;
  if (li >= lines.size()) throw ParseError(static_cast<int>(li + 1), "missing FASTTREE header");

  const std::string prefix = "FASTTREE v1 offsets=";
  long count = 0;
  if (lines[li].rfind(prefix, 0) != 0 || !parse_int(lines[li].substr(prefix.size()), count) ||
      count < 1 || count > 4096)
    throw ParseError(static_cast<int>(li + 1), "bad header: '" + lines[li] + "'");
  ++li;

  OffsetTable offsets;
  bool explicit_table = false;
  while (li < lines.size() && lines[li].rfind("O ", 0) == 0) {
    const auto parts = split_spaces(lines[li]);
    long idx = 0, dx = 0, dy = 0;
    if (parts.size() != 4 || !parse_int(parts[1], idx) || !parse_int(parts[2], dx) ||
        !parse_int(parts[3], dy) || idx != static_cast<long>(offsets.size()))
      throw ParseError(static_cast<int>(li + 1), "bad offset line: '" + lines[li] + "'");
    offsets.push_back({static_cast<int>(dx), static_cast<int>(dy)});
    explicit_table = true;
    ++li;
  }
  bool ring = false;
  if (!explicit_table) {
    if (count != kRingSize)
      throw ParseError(static_cast<int>(li), "offsets=" + std::to_string(count) +
                                                 " requires an O table");
    offsets = ring_offsets();
    ring = true;
  } else if (static_cast<long>(offsets.size()) != count) {
    throw ParseError(static_cast<int>(li), "offset table has " + std::to_string(offsets.size()) +
                                               " entries, header says " + std::to_string(count));
  }

  std::vector<TernaryTree::Node> nodes;
  std::vector<int> node_line;
  // Parse recursively in pre-order, b, s, d.
  auto parse = [&](auto&& self, int depth) -> std::uint32_t {
    if (depth > 100000) throw ParseError(static_cast<int>(li + 1), "tree too deep");
    if (li >= lines.size() || lines[li].empty())
      throw ParseError(static_cast<int>(li + 1), "unexpected end of tree");
    const auto parts = split_spaces(lines[li]);
    const int line_no = static_cast<int>(li + 1);
    long v = 0;
    if (parts.size() != 2 || !parse_int(parts[1], v))
      throw ParseError(line_no, "bad node line: '" + lines[li] + "'");
    const auto index = static_cast<std::uint32_t>(nodes.size());
    nodes.emplace_back();
    ++li;
    if (parts[0] == "L") {
      if (v != 0 && v != 1) throw ParseError(line_no, "leaf class must be 0 or 1");
      nodes[index].leaf_class = static_cast<std::uint8_t>(v);
      return index;
    }
    if (parts[0] != "N") throw ParseError(line_no, "expected N or L, got '" + parts[0] + "'");
    const long feature = ring ? v - 1 : v;
    if (feature < 0 || feature >= static_cast<long>(offsets.size()))
      throw ParseError(line_no, "offset index " + std::to_string(v) + " out of range for " +
                                    std::to_string(offsets.size()) + "-offset table");
    nodes[index].feature = static_cast<std::int32_t>(feature);
    for (PixelState s : kFileOrder) {
      const std::uint32_t c = self(self, depth + 1);
      nodes[index].child[static_cast<int>(s)] = c;
    }
    return index;
  };
  parse(parse, 0);
  while (li < lines.size() && lines[li].empty()) ++li;
  if (li < lines.size()) throw ParseError(static_cast<int>(li + 1), "trailing data after tree");
  return TernaryTree(std::move(offsets), std::move(nodes));
}

}  // namespace cornerforge
