#include "cornerforge/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "cornerforge/error.hpp"
#include "cornerforge/pgm.hpp"
#include "cornerforge/synthetic.hpp"

namespace cornerforge {

std::string frame_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%03d.pgm", index);
  return buf;
}

std::string homography_file_name(int i, int j) {
  return "H_" + std::to_string(i) + "_to_" + std::to_string(j) + ".txt";
}

std::string dense_map_file_name(int i, int j) {
  return "W_" + std::to_string(i) + "_to_" + std::to_string(j) + ".warp";
}

namespace {

Homography random_frame_to_base(std::mt19937_64& rng, double magnitude, double fw, double fh, double bw,
                                double bh) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double angle = 0.3 * magnitude * u(rng);
  const double scale = std::exp(0.2 * magnitude * u(rng));
  const double tx = 0.05 * magnitude * bw * u(rng);
  const double ty = 0.05 * magnitude * bh * u(rng);
  const double px = 0.15 * magnitude * u(rng) / fw;
  const double py = 0.15 * magnitude * u(rng) / fh;

  Eigen::Matrix3d to_center = Eigen::Matrix3d::Identity();
  to_center(0, 2) = -(fw - 1) / 2;
  to_center(1, 2) = -(fh - 1) / 2;
  Eigen::Matrix3d persp = Eigen::Matrix3d::Identity();
  persp(2, 0) = px;
  persp(2, 1) = py;
  Eigen::Matrix3d similarity = Eigen::Matrix3d::Identity();
  similarity(0, 0) = scale * std::cos(angle);
  similarity(0, 1) = -scale * std::sin(angle);
  similarity(1, 0) = scale * std::sin(angle);
  similarity(1, 1) = scale * std::cos(angle);
  Eigen::Matrix3d to_base = Eigen::Matrix3d::Identity();
  to_base(0, 2) = (bw - 1) / 2 + tx;
  to_base(1, 2) = (bh - 1) / 2 + ty;
  return Homography(to_base * similarity * persp * to_center);
}

}  // namespace

Dataset make_dataset(const GrayImage& base, const DatasetOptions& options) {
  if (base.empty()) throw PreconditionError("make_dataset: empty base image");
  if (options.frames < 1) throw PreconditionError("make_dataset: at least one frame required");
  const int w = options.width > 0 ? options.width : base.width();
  const int h = options.height > 0 ? options.height : base.height();
  if (w > base.width() || h > base.height()) throw PreconditionError("make_dataset: frames larger than base");

  Dataset ds;
  ds.policy = options.pairs;
  std::mt19937_64 rng(options.seed);
  for (int k = 0; k < options.frames; ++k) {
    Homography m;
    if (k == 0)
      m = Homography::translation((base.width() - w) / 2, (base.height() - h) / 2);
    else
      m = random_frame_to_base(rng, options.warp_magnitude, w, h, base.width(), base.height());
    ds.frame_to_base.push_back(m);
    GrayImage frame = (k == 0 && w == base.width() && h == base.height()) ? base : warp_image(base, m, w, h);
    if (options.noise_sigma > 0)
      frame = add_gaussian_noise(frame, options.noise_sigma, mix_seed(options.seed, static_cast<std::uint64_t>(k)));
    ds.sequence.frames.push_back(std::move(frame));
  }
  ds.sequence.pairs = make_pairs(options.frames, options.pairs);
  for (const auto& [i, j] : ds.sequence.pairs)
    ds.sequence.warps.emplace(std::pair{i, j}, ds.frame_to_base[static_cast<std::size_t>(j)].inverse() *
                                                   ds.frame_to_base[static_cast<std::size_t>(i)]);
  return ds;
}

void write_dataset(const std::filesystem::path& dir, const Dataset& dataset, const std::vector<std::string>& header) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  const auto& seq = dataset.sequence;
  std::ostringstream manifest;
  for (const auto& line : header) manifest << "# " << line << '\n';
  manifest << "frames " << seq.frames.size() << '\n';
  if (!seq.frames.empty()) manifest << "size " << seq.frames[0].width() << ' ' << seq.frames[0].height() << '\n';
  manifest << "pairs " << to_string(dataset.policy) << '\n';
  for (std::size_t k = 0; k < seq.frames.size(); ++k)
    write_pgm_file(dir / frame_file_name(static_cast<int>(k)), seq.frames[k]);
  for (const auto& [pair, warp] : seq.warps) {
    if (const auto* h = std::get_if<Homography>(&warp))
      write_homography_file(dir / homography_file_name(pair.first, pair.second), *h);
    else
      write_dense_map_file(dir / dense_map_file_name(pair.first, pair.second), std::get<DenseMap>(warp));
  }
  write_text_file(dir / "dataset.txt", manifest.str());
}

Sequence load_dataset(const std::filesystem::path& dir) {
  const std::string text = read_text_file(dir / "dataset.txt");
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  long long frames = -1, width = -1, height = -1;
  PairPolicy policy = PairPolicy::all;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    bool ok = true;
    if (key == "frames") {
      ok = static_cast<bool>(ls >> frames) && frames >= 1;
    } else if (key == "size") {
      ok = static_cast<bool>(ls >> width >> height) && width > 0 && height > 0;
    } else if (key == "pairs") {
      std::string p;
      ok = static_cast<bool>(ls >> p);
      if (ok) policy = parse_pair_policy(p);
    } else {
      throw ParseError(line_no, "unknown manifest key '" + key + "'");
    }
    if (!ok) throw ParseError(line_no, "malformed manifest line '" + line + "'");
  }
  if (frames < 1) throw DataError("dataset manifest does not declare frames");

  Sequence seq;
  for (int k = 0; k < frames; ++k) {
    GrayImage img = read_pgm_file(dir / frame_file_name(k));
    if (width < 0) {
      width = img.width();
      height = img.height();
    }
    if (img.width() != width || img.height() != height)
      throw DataError("frame " + std::to_string(k) + " is " + std::to_string(img.width()) + "x" +
                      std::to_string(img.height()) + ", expected " + std::to_string(width) + "x" +
                      std::to_string(height));
    seq.frames.push_back(std::move(img));
  }
  seq.pairs = make_pairs(static_cast<int>(frames), policy);
  for (const auto& [i, j] : seq.pairs) {
    const auto hpath = dir / homography_file_name(i, j);
    const auto wpath = dir / dense_map_file_name(i, j);
    if (std::filesystem::exists(hpath))
      seq.warps.emplace(std::pair{i, j}, read_homography_file(hpath));
    else if (std::filesystem::exists(wpath))
      seq.warps.emplace(std::pair{i, j}, read_dense_map_file(wpath));
    else
      throw DataError("missing warp for pair " + std::to_string(i) + " -> " + std::to_string(j) + " (" +
                      hpath.filename().string() + ")");
  }
  seq.validate();
  return seq;
}

}  // namespace cornerforge
