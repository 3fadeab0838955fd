#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace cornerforge {

/// Pixel displacement from a candidate (nucleus) pixel.
struct Offset {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const Offset&, const Offset&) = default;
  friend auto operator<=>(const Offset&, const Offset&) = default;
  Offset operator-() const { return {-dx, -dy}; }
};

using OffsetTable = std::vector<Offset>;

inline constexpr int kRingSize = 16;

/// The 16-pixel radius-3 Bresenham ring. Slot i (0-based) holds ring index
/// i + 1; index 1 is straight up and the ring proceeds clockwise, so slots
/// i and i + 8 are antipodal.
inline constexpr std::array<Offset, kRingSize> kRingOffsets = {{
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0}, {3, 1}, {2, 2}, {1, 3},
    {0, 3}, {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3},
}};

/// The ring as an owning table, for trees over the 16 ring pixels.
const OffsetTable& ring_offsets();

/// Offset of 1-based ring index `index` (1..16).
Offset ring_offset(int index);

bool is_ring_table(std::span<const Offset> table);

/// Largest Chebyshev magnitude in the table; the border margin a detector
/// built on it needs.
int chebyshev_radius(std::span<const Offset> table);

/// One of the eight rotations/reflections of the pixel grid.
/// quarter_turns clockwise turns, applied after an optional left-right mirror.
struct GridSymmetry {
  int quarter_turns = 0;
  bool mirrored = false;

  Offset apply(Offset o) const {
    if (mirrored) o.dx = -o.dx;
    for (int i = 0; i < quarter_turns; ++i) o = {-o.dy, o.dx};
    return o;
  }

  static std::array<GridSymmetry, 8> all() {
    return {{{0, false}, {1, false}, {2, false}, {3, false},
             {0, true}, {1, true}, {2, true}, {3, true}}};
  }
};

}  // namespace cornerforge
