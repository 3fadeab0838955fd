#include "cornerforge/emit.hpp"

#include <map>
#include <sstream>

namespace cornerforge {
namespace {

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

// Structural ids so that identical sibling subtrees can be detected cheaply.
std::vector<std::int64_t> subtree_ids(const TernaryTree& tree) {
  const auto& nodes = tree.nodes();
  std::map<std::array<std::int64_t, 4>, std::int64_t> intern;
  std::vector<std::int64_t> id(nodes.size());
  for (std::size_t k = nodes.size(); k-- > 0;) {
    const auto& n = nodes[k];
    if (n.is_leaf()) {
      id[k] = n.leaf_class;
      continue;
    }
    const std::array<std::int64_t, 4> key{n.feature, id[n.branch(PixelState::brighter)],
                                          id[n.branch(PixelState::similar)],
                                          id[n.branch(PixelState::darker)]};
    id[k] = intern.try_emplace(key, static_cast<std::int64_t>(intern.size()) + 2).first->second;
  }
  return id;
}

class Emitter {
 public:
  Emitter(const TernaryTree& tree, const EmitOptions& opt)
      : tree_(tree), opt_(opt), ids_(subtree_ids(tree)) {}

  void node(std::size_t i, int depth) {
    const auto& n = tree_.at(i);
    const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
    if (n.is_leaf()) {
      out_ << pad << "return " << (n.leaf_class ? opt_.corner_value : opt_.non_corner_value)
           << ";\n";
      return;
    }
    const Offset o = tree_.offsets()[static_cast<std::size_t>(n.feature)];
    std::string pixel = opt_.pixel;
    replace_all(pixel, "{offset}", std::to_string(o.dy) + " * stride + " + std::to_string(o.dx));

    const auto b = n.branch(PixelState::brighter), s = n.branch(PixelState::similar),
               d = n.branch(PixelState::darker);
    out_ << pad << "{\n" << pad << "  const " << opt_.int_type << " v = " << pixel << ";\n";
    const std::string brighter = "v >= cb", darker = "v <= c_b";
    if (ids_[b] == ids_[s]) {
      branch(pad, "if (" + darker + ")", d, depth);
      branch(pad, "else", b, depth);
    } else if (ids_[d] == ids_[s]) {
      branch(pad, "if (" + brighter + ")", b, depth);
      branch(pad, "else", d, depth);
    } else if (ids_[b] == ids_[d]) {
      branch(pad, "if (" + brighter + " || " + darker + ")", b, depth);
      branch(pad, "else", s, depth);
    } else {
      branch(pad, "if (" + brighter + ")", b, depth);
      branch(pad, "else if (" + darker + ")", d, depth);
      branch(pad, "else", s, depth);
    }
    out_ << pad << "}\n";
  }

  std::string str() const { return out_.str(); }
  std::ostringstream& out() { return out_; }

 private:
  void branch(const std::string& pad, const std::string& head, std::size_t child, int depth) {
    out_ << pad << "  " << head << " {\n";
    node(child, depth + 2);
    out_ << pad << "  }\n";
  }

  const TernaryTree& tree_;
  const EmitOptions& opt_;
  std::vector<std::int64_t> ids_;
  std::ostringstream out_;
};

}  // namespace

std::string emit_source(const TernaryTree& tree, const EmitOptions& options) {
  std::string signature = options.signature;
  replace_all(signature, "{name}", options.function_name);
  Emitter e(tree, options);
  e.out() << signature << " {\n"
          << "  const " << options.int_type << " cb = " << options.center << " + t;\n"
          << "  const " << options.int_type << " c_b = " << options.center << " - t;\n"
          << "  (void)cb;\n  (void)c_b;\n";
  e.node(0, 1);
  e.out() << "}\n";
  return e.str();
}

}  // namespace cornerforge
