#pragma once

#include <string>

#include "cornerforge/ternary_tree.hpp"

namespace cornerforge {

/// Text templates for a curly-brace target language. `{name}` in the
/// signature and `{offset}` in the pixel accessor are substituted; offsets
/// are rendered as "<dy> * stride + <dx>".
struct EmitOptions {
  std::string function_name = "fast_tree_corner";
  std::string signature = "int {name}(const unsigned char* p, int stride, int t)";
  std::string int_type = "int";
  std::string center = "p[0]";
  std::string pixel = "p[{offset}]";
  std::string corner_value = "1";
  std::string non_corner_value = "0";
};

/// C-family source for a function that classifies one pixel with `tree`:
/// one nested conditional block per decision node, two comparisons against
/// center +- t, and a return at every leaf. When two sibling subtrees are
/// identical only the comparison that still separates them is emitted.
std::string emit_source(const TernaryTree& tree, const EmitOptions& options = {});

}  // namespace cornerforge
