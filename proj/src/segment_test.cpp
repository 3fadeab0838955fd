#include "cornerforge/segment_test.hpp"

#include <string>

#include "cornerforge/error.hpp"
#include "cornerforge/parallel.hpp"

namespace cornerforge {

RingConfig RingConfig::uniform(PixelState state) {
  RingConfig cfg;
  for (int i = 0; i < kRingSize; ++i) cfg.set_state(i, state);
  return cfg;
}

RingConfig RingConfig::from_code(std::uint32_t code) {
  if (code >= kCount) throw PreconditionError("ring code out of range: " + std::to_string(code));
  std::uint32_t packed = 0;
  for (int i = 0; i < kRingSize; ++i) {
    packed |= (code % 3) << (2 * i);
    code /= 3;
  }
  return RingConfig(packed);
}

std::uint32_t RingConfig::code() const {
  std::uint32_t code = 0;
  for (int i = kRingSize - 1; i >= 0; --i) code = code * 3 + static_cast<std::uint32_t>(state(i));
  return code;
}

std::uint16_t RingConfig::bright_mask() const noexcept {
  // 0b10 in a slot means brighter.
  std::uint16_t m = 0;
  for (int i = 0; i < kRingSize; ++i) m |= static_cast<std::uint16_t>(((packed_ >> (2 * i + 1)) & 1u) << i);
  return m;
}

std::uint16_t RingConfig::dark_mask() const noexcept {
  // 0b00 in a slot means darker.
  std::uint16_t m = 0;
  for (int i = 0; i < kRingSize; ++i)
    m |= static_cast<std::uint16_t>((((packed_ >> (2 * i)) & 3u) == 0 ? 1u : 0u) << i);
  return m;
}

RingConfig ring_config(const GrayImage& img, Point p, int threshold) {
  RingConfig cfg;
  const int c = img(p.x, p.y);
  for (int i = 0; i < kRingSize; ++i) {
    const Offset o = kRingOffsets[static_cast<std::size_t>(i)];
    cfg.set_state(i, pixel_state(c, img(p.x + o.dx, p.y + o.dy), threshold));
  }
  return cfg;
}

bool has_circular_run(std::uint16_t mask, int n) {
  if (n <= 0) return true;
  if (n > kRingSize) return false;
  const std::uint32_t doubled = mask | (static_cast<std::uint32_t>(mask) << kRingSize);
  std::uint32_t run = doubled;
  for (int k = 1; k < n; ++k) run &= doubled >> k;
  return (run & 0xFFFFu) != 0;
}

bool high_speed_reject(RingConfig cfg) {
  const PixelState s1 = cfg.state(0), s9 = cfg.state(8);
  if (s1 == PixelState::similar && s9 == PixelState::similar) return true;
  int bright = 0, dark = 0;
  for (int slot : {0, 4, 8, 12}) {
    bright += cfg.state(slot) == PixelState::brighter;
    dark += cfg.state(slot) == PixelState::darker;
  }
  return bright < 3 && dark < 3;
}

bool high_speed_reject(const GrayImage& img, Point p, int threshold) {
  return high_speed_reject(ring_config(img, p, threshold));
}

std::vector<Point> detect_fast_n(const GrayImage& img, int n, int threshold, int jobs) {
  if (threshold < 1) throw PreconditionError("threshold must be >= 1");
  constexpr int margin = 3;
  return parallel_strips<Point>(margin, img.height() - margin, jobs,
                                [&](int y0, int y1, std::vector<Point>& out) {
                                  for (int y = y0; y < y1; ++y)
                                    for (int x = margin; x < img.width() - margin; ++x)
                                      if (is_corner_config(ring_config(img, {x, y}, threshold), n))
                                        out.push_back({x, y});
                                });
}

int segment_test_score(const GrayImage& img, Point p, int n) {
  int best = 0;
  for (int t = 1; t <= 255; ++t) {
    if (!is_corner_config(ring_config(img, p, t), n)) break;
    best = t;
  }
  return best;
}

}  // namespace cornerforge
