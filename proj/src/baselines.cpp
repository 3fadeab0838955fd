#include "cornerforge/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "cornerforge/error.hpp"
#include "cornerforge/parallel.hpp"

namespace cornerforge {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * i * i / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable convolution with border replication.
ScalarField blur(const ScalarField& in, const std::vector<double>& kernel, int jobs) {
  const int r = static_cast<int>(kernel.size() / 2);
  const int w = in.width, h = in.height;
  ScalarField tmp(w, h), out(w, h);
  parallel_for(static_cast<std::size_t>(h), jobs, [&](std::size_t yi) {
    const int y = static_cast<int>(yi);
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += kernel[static_cast<std::size_t>(i + r)] * in(std::clamp(x + i, 0, w - 1), y);
      tmp(x, y) = s;
    }
  });
  parallel_for(static_cast<std::size_t>(h), jobs, [&](std::size_t yi) {
    const int y = static_cast<int>(yi);
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += kernel[static_cast<std::size_t>(i + r)] * tmp(x, std::clamp(y + i, 0, h - 1));
      out(x, y) = s;
    }
  });
  return out;
}

}  // namespace

StructureTensor structure_tensor(const GrayImage& img, double sigma, int jobs) {
  if (!(sigma > 0)) throw PreconditionError("structure_tensor: sigma must be positive");
  const int w = img.width(), h = img.height();
  StructureTensor t{ScalarField(w, h), ScalarField(w, h), ScalarField(w, h)};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double gx = 0.5 * (img(std::min(x + 1, w - 1), y) - img(std::max(x - 1, 0), y));
      const double gy = 0.5 * (img(x, std::min(y + 1, h - 1)) - img(x, std::max(y - 1, 0)));
      t.xx(x, y) = gx * gx;
      t.xy(x, y) = gx * gy;
      t.yy(x, y) = gy * gy;
    }
  const auto kernel = gaussian_kernel(sigma);
  t.xx = blur(t.xx, kernel, jobs);
  t.xy = blur(t.xy, kernel, jobs);
  t.yy = blur(t.yy, kernel, jobs);
  return t;
}

ScalarField harris_response(const StructureTensor& tensor, double k) {
  ScalarField out(tensor.width(), tensor.height());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double a = tensor.xx.values[i], b = tensor.xy.values[i], c = tensor.yy.values[i];
    out.values[i] = (a * c - b * b) - k * (a + c) * (a + c);
  }
  return out;
}

ScalarField shi_tomasi_response(const StructureTensor& tensor) {
  ScalarField out(tensor.width(), tensor.height());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double a = tensor.xx.values[i], b = tensor.xy.values[i], c = tensor.yy.values[i];
    const double half = 0.5 * (a - c);
    out.values[i] = 0.5 * (a + c) - std::sqrt(half * half + b * b);
  }
  return out;
}

std::vector<Keypoint> response_maxima(const ScalarField& field, int margin) {
  std::vector<Keypoint> pts;
  for (int y = margin; y < field.height - margin; ++y)
    for (int x = margin; x < field.width - margin; ++x)
      if (const double v = field(x, y); v > 0) pts.push_back({x, y, v});
  return nonmax_suppress(pts);
}

std::vector<Keypoint> detect_response(const ScalarField& field, std::size_t n, int margin) {
  return top_n_by_score(response_maxima(field, margin), n);
}

std::vector<Point> random_interior_points(int width, int height, std::size_t n, std::uint64_t seed,
                                          int margin) {
  const long long iw = width - 2LL * margin, ih = height - 2LL * margin;
  const std::size_t total = (iw > 0 && ih > 0) ? static_cast<std::size_t>(iw * ih) : 0;
  if (n > total) throw PreconditionError("detect_random: more points requested than interior pixels");
  // Partial Fisher-Yates over a virtual identity array; only touched slots
  // are stored.
  std::mt19937_64 rng(seed);
  std::unordered_map<std::size_t, std::size_t> swapped;
  auto at = [&](std::size_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    const std::size_t j = pick(rng);
    const std::size_t vj = at(j), vi = at(i);
    swapped[j] = vi;
    swapped[i] = vj;
    out.push_back({margin + static_cast<int>(static_cast<long long>(vj) % iw),
                   margin + static_cast<int>(static_cast<long long>(vj) / iw)});
  }
  return out;
}

std::vector<Keypoint> detect_random(const GrayImage& img, std::size_t n, std::uint64_t seed, int margin) {
  std::vector<Keypoint> out;
  for (const Point& p : random_interior_points(img.width(), img.height(), n, seed, margin))
    out.push_back({p.x, p.y, 1.0});
  sort_raster(out);
  return out;
}

}  // namespace cornerforge
