// Writes C++ source for the learned FAST-9 and FAST-12 trees.

#include <cstdio>
#include <string>

#include "cornerforge/emit.hpp"
#include "cornerforge/id3.hpp"
#include "cornerforge/pgm.hpp"

using namespace cornerforge;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: emit_gen OUT.cpp\n");
    return 1;
  }
  std::string text;
  for (int n : {9, 12}) {
    EmitOptions o;
    o.function_name = "emitted_fast" + std::to_string(n);
    text += emit_source(learn_segment_test_tree(n), o) + "\n";
  }
  write_text_file(argv[1], text);
  return 0;
}
