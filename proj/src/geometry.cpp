#include "cornerforge/geometry.hpp"

#include <Eigen/LU>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cornerforge/error.hpp"
#include "cornerforge/pgm.hpp"

namespace cornerforge {

Homography::Homography(const Eigen::Matrix3d& m) : m_(m) {
  if (!(std::abs(m.determinant()) > 1e-12))
    throw PreconditionError("singular homography");
}

Homography Homography::translation(double tx, double ty) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 2) = tx;
  m(1, 2) = ty;
  return Homography(m);
}

std::optional<Point2d> Homography::apply(Point2d p) const {
  const Eigen::Vector3d q = m_ * Eigen::Vector3d(p.x, p.y, 1.0);
  if (std::abs(q.z()) < 1e-15) return std::nullopt;
  return Point2d{q.x() / q.z(), q.y() / q.z()};
}

Homography Homography::inverse() const { return Homography(m_.inverse()); }

Homography Homography::operator*(const Homography& other) const {
  return Homography(m_ * other.m_);
}

Homography parse_homography(const std::string& text) {
  std::istringstream in(text);
  Eigen::Matrix3d m;
  for (int i = 0; i < 9; ++i) {
    double v = 0.0;
    if (!(in >> v)) throw DataError("homography needs 9 reals, found " + std::to_string(i));
    m(i / 3, i % 3) = v;
  }
  std::string extra;
  if (in >> extra) throw DataError("trailing data after homography: " + extra);
  if (!(std::abs(m.determinant()) > 1e-12)) throw DataError("singular homography");
  return Homography(m);
}

std::string format_homography(const Homography& h) {
  std::string out;
  char buf[64];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", h.matrix()(r, c));
      out += buf;
      out += c == 2 ? '\n' : ' ';
    }
  }
  return out;
}

Homography read_homography_file(const std::filesystem::path& path) {
  try {
    return parse_homography(read_text_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_homography_file(const std::filesystem::path& path, const Homography& h) {
  write_text_file(path, format_homography(h));
}

}  // namespace cornerforge
