#include "cscp/model/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cscp::model {

Eigen::Matrix3d frame_from_normal(const Eigen::Vector3d& n) {
  Eigen::Vector3d ref = Eigen::Vector3d::UnitX();
  if (std::abs(n.dot(ref)) > 0.9) ref = Eigen::Vector3d::UnitY();
  const Eigen::Vector3d x = (ref - ref.dot(n) * n).normalized();
  Eigen::Matrix3d R;
  R.col(0) = x;
  R.col(1) = n.cross(x);
  R.col(2) = n;
  return R;
}

TerrainSurface::TerrainSurface(std::vector<Eigen::Vector3d> corners, double friction)
    : corners_(std::move(corners)), friction_(friction) {
  const std::size_t k = corners_.size();
  if (k < 3) throw std::invalid_argument("surface needs at least three corners");
  if (!(friction_ > 0.0)) throw std::invalid_argument("surface friction must be positive");

  // Newell normal follows the right-hand corner order.
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  centroid_.setZero();
  for (std::size_t i = 0; i < k; ++i) {
    const auto& a = corners_[i];
    const auto& b = corners_[(i + 1) % k];
    n += a.cross(b);
    centroid_ += a;
  }
  centroid_ /= static_cast<double>(k);
  double scale = 0.0;
  for (const auto& c : corners_) scale = std::max(scale, (c - centroid_).norm());
  if (n.norm() <= 1e-12 * std::max(1.0, scale * scale))
    throw std::invalid_argument("degenerate surface: collinear corners");
  n.normalize();
  if (n.z() < -1e-12) {
    std::reverse(corners_.begin(), corners_.end());
    n = -n;
  }
  for (const auto& c : corners_)
    if (std::abs(n.dot(c - centroid_)) > 1e-9 * std::max(1.0, scale))
      throw std::invalid_argument("surface corners are not coplanar");
  normal_ = n;
  rotation_ = frame_from_normal(n);

  A_.resize(static_cast<Eigen::Index>(k), 3);
  b_.resize(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    const auto& a = corners_[i];
    const auto& b = corners_[(i + 1) % k];
    const Eigen::Vector3d out = (b - a).cross(n).normalized();
    A_.row(static_cast<Eigen::Index>(i)) = out.transpose();
    b_[static_cast<Eigen::Index>(i)] = out.dot(a);
  }
  for (const auto& c : corners_)
    if (((A_ * c - b_).array() > 1e-9 * std::max(1.0, scale)).any())
      throw std::invalid_argument("surface corners are not convex");
}

double TerrainSurface::lateral_violation(const Eigen::Vector3d& p) const {
  return std::max(0.0, (A_ * p - b_).maxCoeff());
}

double TerrainSurface::plane_distance(const Eigen::Vector3d& p) const {
  return normal_.dot(p) - plane_offset();
}

double TerrainSurface::membership_violation(const Eigen::Vector3d& p) const {
  return std::max(lateral_violation(p), std::abs(plane_distance(p)));
}

}  // namespace cscp::model
