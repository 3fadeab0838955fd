#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <string>

namespace cornerforge {

struct Point2d {
  double x = 0.0;
  double y = 0.0;
};

/// Planar projective transform acting on pixel coordinates.
class Homography {
 public:
  Homography() : m_(Eigen::Matrix3d::Identity()) {}
  /// Throws PreconditionError when |det| <= 1e-12.
  explicit Homography(const Eigen::Matrix3d& m);

  static Homography identity() { return Homography(); }
  static Homography translation(double tx, double ty);

  const Eigen::Matrix3d& matrix() const noexcept { return m_; }

  /// Maps p; empty when p lands on the line at infinity.
  std::optional<Point2d> apply(Point2d p) const;
  Homography inverse() const;
  /// (this * other)(p) == this(other(p)).
  Homography operator*(const Homography& other) const;

 private:
  Eigen::Matrix3d m_;
};

/// Nine whitespace-separated reals, row-major.
Homography parse_homography(const std::string& text);
std::string format_homography(const Homography& h);
Homography read_homography_file(const std::filesystem::path& path);
void write_homography_file(const std::filesystem::path& path, const Homography& h);

}  // namespace cornerforge
