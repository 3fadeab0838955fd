#include "cornerforge/repeatability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>
#include <unordered_map>

#include "cornerforge/error.hpp"
#include "cornerforge/parallel.hpp"
#include "cornerforge/pgm.hpp"
#include "cornerforge/synthetic.hpp"

namespace cornerforge {

DenseMap::DenseMap(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw PreconditionError("dense map dimensions must be positive");
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  tx_.assign(n, 0.0f);
  ty_.assign(n, 0.0f);
  vis_.assign(n, 0);
}

void DenseMap::set(int x, int y, float tx, float ty, bool visible) {
  const std::size_t i = index(x, y);
  tx_[i] = tx;
  ty_[i] = ty;
  vis_[i] = visible ? 1 : 0;
}

namespace {

void put_f32(std::vector<std::uint8_t>& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
}

float get_f32(const std::uint8_t* p) {
  std::uint32_t bits = 0;
  for (int k = 0; k < 4; ++k) bits |= static_cast<std::uint32_t>(p[k]) << (8 * k);
  return std::bit_cast<float>(bits);
}

}  // namespace

std::vector<std::uint8_t> encode_dense_map(const DenseMap& map) {
  const std::string header = "WARP v1 " + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + 9 * static_cast<std::size_t>(map.width()) * static_cast<std::size_t>(map.height()));
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x) {
      const Point2d t = map.target(x, y);
      put_f32(out, static_cast<float>(t.x));
      put_f32(out, static_cast<float>(t.y));
      out.push_back(map.visible(x, y) ? 1 : 0);
    }
  return out;
}

DenseMap decode_dense_map(std::span<const std::uint8_t> bytes) {
  const auto nl = std::find(bytes.begin(), bytes.end(), std::uint8_t{'\n'});
  if (nl == bytes.end()) throw DataError("dense map: missing header line");
  std::istringstream header(std::string(bytes.begin(), nl));
  std::string magic, version;
  long long w = 0, h = 0;
  if (!(header >> magic >> version >> w >> h) || magic != "WARP" || version != "v1")
    throw DataError("dense map: expected header 'WARP v1 <w> <h>'");
  if (w <= 0 || h <= 0 || w > (1 << 16) || h > (1 << 16)) throw DataError("dense map: bad dimensions");
  const std::size_t offset = static_cast<std::size_t>(nl - bytes.begin()) + 1;
  const std::size_t need = 9 * static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - offset != need) throw DataError("dense map: payload size does not match dimensions");
  DenseMap map(static_cast<int>(w), static_cast<int>(h));
  const std::uint8_t* p = bytes.data() + offset;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x, p += 9) map.set(x, y, get_f32(p), get_f32(p + 4), p[8] != 0);
  return map;
}

DenseMap read_dense_map_file(const std::filesystem::path& path) {
  return decode_dense_map(read_file_bytes(path));
}

void write_dense_map_file(const std::filesystem::path& path, const DenseMap& map) {
  write_file_bytes(path, encode_dense_map(map));
}

std::optional<Point2d> project(const WarpModel& warp, Point p, int target_width, int target_height) {
  std::optional<Point2d> q;
  if (const auto* h = std::get_if<Homography>(&warp)) {
    q = h->apply({static_cast<double>(p.x), static_cast<double>(p.y)});
  } else {
    const auto& map = std::get<DenseMap>(warp);
    if (p.x < 0 || p.y < 0 || p.x >= map.width() || p.y >= map.height())
      throw PreconditionError("project: point outside the dense map");
    if (map.visible(p.x, p.y)) q = map.target(p.x, p.y);
  }
  // Inside means within the pixel grid's extent: [-0.5, size - 0.5).
  if (!q || !(q->x >= -0.5 && q->y >= -0.5 && q->x < target_width - 0.5 && q->y < target_height - 0.5))
    return std::nullopt;
  return q;
}

std::optional<double> RepeatSample::ratio() const {
  if (useful == 0) return std::nullopt;
  return static_cast<double>(repeated) / static_cast<double>(useful);
}

namespace {

constexpr std::size_t kBruteForceLimit = 10000;

class GridIndex {
 public:
  GridIndex(std::span<const Keypoint> pts, double cell) : cell_(cell) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      cells_[key(cell_of(pts[i].x), cell_of(pts[i].y))].push_back(i);
  }

  template <class Fn>
  bool any_near(double x, double y, Fn&& fn) const {
    const long long cx = cell_of(x), cy = cell_of(y);
    for (long long gy = cy - 1; gy <= cy + 1; ++gy)
      for (long long gx = cx - 1; gx <= cx + 1; ++gx) {
        const auto it = cells_.find(key(gx, gy));
        if (it == cells_.end()) continue;
        for (std::size_t i : it->second)
          if (fn(i)) return true;
      }
    return false;
  }

 private:
  long long cell_of(double v) const { return static_cast<long long>(std::floor(v / cell_)); }
  static std::uint64_t key(long long gx, long long gy) {
    return (static_cast<std::uint64_t>(gx) << 32) ^ static_cast<std::uint64_t>(gy & 0xFFFFFFFF);
  }
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

}  // namespace

RepeatSample pair_repeatability(std::span<const Keypoint> det_i, std::span<const Keypoint> det_j,
                                const WarpModel& warp, int target_width, int target_height, double epsilon,
                                MatchMethod method) {
  if (!(epsilon > 0)) throw PreconditionError("epsilon must be positive");
  if (method == MatchMethod::automatic)
    method = std::max(det_i.size(), det_j.size()) < kBruteForceLimit ? MatchMethod::brute_force : MatchMethod::grid;
  const double eps2 = epsilon * epsilon;
  auto within = [&](const Point2d& q, const Keypoint& k) {
    const double dx = k.x - q.x, dy = k.y - q.y;
    return dx * dx + dy * dy <= eps2;
  };

  std::optional<GridIndex> grid;
  if (method == MatchMethod::grid) grid.emplace(det_j, epsilon);

  RepeatSample s;
  for (const Keypoint& k : det_i) {
    const auto q = project(warp, k.position(), target_width, target_height);
    if (!q) continue;
    ++s.useful;
    bool hit = false;
    if (grid)
      hit = grid->any_near(q->x, q->y, [&](std::size_t i) { return within(*q, det_j[i]); });
    else
      hit = std::ranges::any_of(det_j, [&](const Keypoint& t) { return within(*q, t); });
    if (hit) ++s.repeated;
  }
  return s;
}

std::optional<double> pooled_repeatability(std::span<const RepeatSample> samples) {
  RepeatSample total;
  for (const auto& s : samples) {
    total.useful += s.useful;
    total.repeated += s.repeated;
  }
  return total.ratio();
}

std::optional<double> weighted_mean_repeatability(std::span<const RepeatSample> samples) {
  double num = 0.0, den = 0.0;
  for (const auto& s : samples) {
    if (const auto r = s.ratio()) {
      num += static_cast<double>(s.useful) * *r;
      den += static_cast<double>(s.useful);
    }
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

std::string to_string(PairPolicy policy) {
  switch (policy) {
    case PairPolicy::all: return "all";
    case PairPolicy::adjacent: return "adjacent";
    case PairPolicy::adjacent_skip: return "adjacent-skip";
  }
  return "all";
}

PairPolicy parse_pair_policy(const std::string& text) {
  if (text == "all") return PairPolicy::all;
  if (text == "adjacent") return PairPolicy::adjacent;
  if (text == "adjacent-skip") return PairPolicy::adjacent_skip;
  throw DataError("unknown pair policy '" + text + "'");
}

std::vector<std::pair<int, int>> make_pairs(int frame_count, PairPolicy policy) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < frame_count; ++i)
    for (int j = 0; j < frame_count; ++j) {
      if (i == j) continue;
      const int gap = std::abs(i - j);
      if (policy == PairPolicy::all || (policy == PairPolicy::adjacent && gap == 1) ||
          (policy == PairPolicy::adjacent_skip && gap <= 2))
        pairs.emplace_back(i, j);
    }
  return pairs;
}

const WarpModel& Sequence::warp(int i, int j) const {
  const auto it = warps.find({i, j});
  if (it == warps.end())
    throw DataError("missing warp for pair " + std::to_string(i) + " -> " + std::to_string(j));
  return it->second;
}

void Sequence::validate() const {
  const int n = static_cast<int>(frames.size());
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      throw DataError("invalid pair " + std::to_string(i) + " -> " + std::to_string(j));
    const auto& w = warp(i, j);
    if (const auto* m = std::get_if<DenseMap>(&w);
        m && (m->width() != frames[static_cast<std::size_t>(i)].width() ||
              m->height() != frames[static_cast<std::size_t>(i)].height()))
      throw DataError("dense map size does not match frame " + std::to_string(i));
  }
}

SequenceResult evaluate_detections(const Sequence& seq, std::span<const std::vector<Keypoint>> detections,
                                   const EvalOptions& options) {
  seq.validate();
  if (detections.size() != seq.frames.size()) throw PreconditionError("one detection list per frame required");
  SequenceResult result;
  result.samples.resize(seq.pairs.size());
  parallel_for(seq.pairs.size(), options.jobs, [&](std::size_t k) {
    const auto [i, j] = seq.pairs[k];
    const auto& target = seq.frames[static_cast<std::size_t>(j)];
    result.samples[k] = pair_repeatability(detections[static_cast<std::size_t>(i)],
                                           detections[static_cast<std::size_t>(j)], seq.warp(i, j),
                                           target.width(), target.height(), options.epsilon);
  });
  result.repeatability = pooled_repeatability(result.samples);
  return result;
}

namespace {

std::vector<std::vector<Keypoint>> candidate_pools(const std::vector<GrayImage>& frames,
                                                   const FeatureDetector& detector, int jobs) {
  std::vector<std::vector<Keypoint>> pools(frames.size());
  parallel_for(frames.size(), jobs, [&](std::size_t i) { pools[i] = detector.candidates(frames[i], i); });
  return pools;
}

}  // namespace

SequenceResult sequence_repeatability(const Sequence& seq, const FeatureDetector& detector, std::size_t n,
                                      const EvalOptions& options) {
  seq.validate();
  std::vector<std::vector<Keypoint>> dets(seq.frames.size());
  parallel_for(seq.frames.size(), options.jobs,
               [&](std::size_t i) { dets[i] = detector.detect(seq.frames[i], n, i); });
  return evaluate_detections(seq, dets, options);
}

std::vector<std::size_t> default_count_grid() {
  std::vector<std::size_t> grid;
  for (std::size_t c = 0; c <= 2000; c += 25) grid.push_back(c);
  return grid;
}

Curve repeatability_curve(const Sequence& seq, const FeatureDetector& detector,
                          std::span<const std::size_t> counts, const EvalOptions& options) {
  if (!std::ranges::is_sorted(counts)) throw PreconditionError("counts must be ascending");
  seq.validate();
  const auto pools = candidate_pools(seq.frames, detector, options.jobs);
  Curve curve;
  for (std::size_t count : counts) {
    std::vector<std::vector<Keypoint>> dets(pools.size());
    for (std::size_t i = 0; i < pools.size(); ++i) dets[i] = detector.select(pools[i], count);
    curve.push_back({count, evaluate_detections(seq, dets, options).repeatability});
  }
  return curve;
}

double area_under_curve(const Curve& curve, double max_count) {
  if (curve.empty()) throw PreconditionError("area_under_curve: empty curve");
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (curve[i].count < curve[i - 1].count) throw PreconditionError("area_under_curve: counts must be ascending");
  if (curve.front().count > 0 || static_cast<double>(curve.back().count) < max_count)
    throw PreconditionError("area_under_curve: curve must span counts 0 to " +
                            std::to_string(static_cast<long long>(max_count)));
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : curve)
    if (p.repeatability && static_cast<double>(p.count) <= max_count)
      pts.emplace_back(static_cast<double>(p.count), *p.repeatability);
  if (pts.empty()) return 0.0;
  double area = pts.front().first * pts.front().second + (max_count - pts.back().first) * pts.back().second;
  for (std::size_t i = 1; i < pts.size(); ++i)
    area += 0.5 * (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second);
  return area;
}

std::vector<NoisePoint> noise_sweep(const Sequence& seq, const FeatureDetector& detector, std::size_t n,
                                    std::span<const double> sigmas, std::uint64_t seed,
                                    const EvalOptions& options) {
  std::vector<NoisePoint> out;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    Sequence noisy = seq;
    for (std::size_t f = 0; f < noisy.frames.size(); ++f)
      noisy.frames[f] = add_gaussian_noise(seq.frames[f], sigmas[k], mix_seed(mix_seed(seed, k), f));
    out.push_back({sigmas[k], sequence_repeatability(noisy, detector, n, options).repeatability});
  }
  return out;
}

std::string format_curve_csv(const Curve& curve) {
  std::ostringstream os;
  os << "count,repeatability\n";
  os.precision(10);
  for (const auto& p : curve) os << p.count << ',' << p.repeatability.value_or(0.0) << '\n';
  return os.str();
}

std::string format_auc_csv(std::span<const std::pair<std::string, double>> rows) {
  std::ostringstream os;
  os << "detector,A\n";
  os.precision(10);
  for (const auto& [name, a] : rows) os << name << ',' << a << '\n';
  return os.str();
}

std::string render_curves_svg(std::span<const std::pair<std::string, Curve>> curves) {
  constexpr double W = 640, H = 400, L = 60, R = 150, T = 20, B = 50;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  double max_count = 1;
  for (const auto& [name, c] : curves)
    for (const auto& p : c) max_count = std::max(max_count, static_cast<double>(p.count));
  auto sx = [&](double c) { return L + (W - L - R) * c / max_count; };
  auto sy = [&](double r) { return T + (H - T - B) * (1.0 - r); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(max_count) << "\" y2=\"" << sy(0)
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << sy(0) << "\" x2=\"" << L << "\" y2=\"" << sy(1)
     << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double r = k / 4.0;
    os << "<text x=\"" << L - 8 << "\" y=\"" << sy(r) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << r
       << "</text>\n";
    const double c = max_count * k / 4.0;
    os << "<text x=\"" << sx(c) << "\" y=\"" << sy(0) + 16 << "\" font-size=\"11\" text-anchor=\"middle\">" << c
       << "</text>\n";
  }
  os << "<text x=\"" << sx(max_count / 2) << "\" y=\"" << H - 10
     << "\" font-size=\"12\" text-anchor=\"middle\">corners per frame</text>\n";
  os << "<text x=\"14\" y=\"" << sy(0.5) << "\" font-size=\"12\" transform=\"rotate(-90 14 " << sy(0.5)
     << ")\" text-anchor=\"middle\">repeatability</text>\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const char* color = colors[i % std::size(colors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : curves[i].second)
      if (p.repeatability) os << sx(static_cast<double>(p.count)) << ',' << sy(*p.repeatability) << ' ';
    os << "\"/>\n";
    const double ly = T + 16.0 * static_cast<double>(i + 1);
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 35 << "\" y=\"" << ly << "\" font-size=\"11\">" << curves[i].first << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cornerforge
