#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace cscp::model {

// Planar convex contact region. Corners are reordered if needed so that the normal
// has a non-negative z component; lateral rows are unit-normalised edge halfspaces.
class TerrainSurface {
 public:
  TerrainSurface() = default;
  TerrainSurface(std::vector<Eigen::Vector3d> corners, double friction);

  const std::vector<Eigen::Vector3d>& corners() const { return corners_; }
  double friction() const { return friction_; }
  const Eigen::Vector3d& normal() const { return normal_; }
  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& centroid() const { return centroid_; }
  // Lateral halfspaces A p <= b (one row per edge).
  const Eigen::MatrixX3d& lateral_A() const { return A_; }
  const Eigen::VectorXd& lateral_b() const { return b_; }
  double plane_offset() const { return normal_.dot(corners_.front()); }

  // Largest positive violation of the lateral rows, and the signed distance to the plane.
  double lateral_violation(const Eigen::Vector3d& p) const;
  double plane_distance(const Eigen::Vector3d& p) const;
  double membership_violation(const Eigen::Vector3d& p) const;

 private:
  std::vector<Eigen::Vector3d> corners_;
  double friction_ = 0.0;
  Eigen::Vector3d normal_ = Eigen::Vector3d::UnitZ();
  Eigen::Matrix3d rotation_ = Eigen::Matrix3d::Identity();
  Eigen::Vector3d centroid_ = Eigen::Vector3d::Zero();
  Eigen::MatrixX3d A_;
  Eigen::VectorXd b_;
};

// Frame whose third column is the given unit normal; first column follows world x
// projected onto the plane (world y when the normal is parallel to x).
Eigen::Matrix3d frame_from_normal(const Eigen::Vector3d& n);

}  // namespace cscp::model
