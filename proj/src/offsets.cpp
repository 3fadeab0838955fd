#include "cornerforge/offsets.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "cornerforge/error.hpp"

namespace cornerforge {

const OffsetTable& ring_offsets() {
  static const OffsetTable table(kRingOffsets.begin(), kRingOffsets.end());
  return table;
}

Offset ring_offset(int index) {
  if (index < 1 || index > kRingSize)
    throw PreconditionError("ring index must be in 1..16, got " + std::to_string(index));
  return kRingOffsets[static_cast<std::size_t>(index - 1)];
}

bool is_ring_table(std::span<const Offset> table) {
  return std::ranges::equal(table, kRingOffsets);
}

int chebyshev_radius(std::span<const Offset> table) {
  int r = 0;
  for (const Offset& o : table) r = std::max({r, std::abs(o.dx), std::abs(o.dy)});
  return r;
}

}  // namespace cornerforge
