#include "cscp/mip/surface.hpp"

#include <limits>
#include <stdexcept>

namespace cscp::mip {

Eigen::VectorXd HalfspaceSystem::violation(const Eigen::Vector3d& p) const {
  return (A * p - b).cwiseMax(0.0);
}

HalfspaceSystem surface_halfspaces(const model::TerrainSurface& surface) {
  const auto& la = surface.lateral_A();
  const auto k = la.rows();
  HalfspaceSystem hs;
  hs.lateral_rows = static_cast<int>(k);
  hs.A.resize(k + 2, 3);
  hs.b.resize(k + 2);
  hs.A.topRows(k) = la;
  hs.b.head(k) = surface.lateral_b();
  hs.A.row(k) = surface.normal().transpose();
  hs.b[k] = surface.plane_offset();
  hs.A.row(k + 1) = -surface.normal().transpose();
  hs.b[k + 1] = -surface.plane_offset();
  return hs;
}

bool Box::contains(const Eigen::Vector3d& p, double tol) const {
  return (p.array() >= lo.array() - tol).all() && (p.array() <= hi.array() + tol).all();
}

Box terrain_bounding_box(const std::vector<model::TerrainSurface>& surfaces, double margin) {
  if (surfaces.empty()) throw std::invalid_argument("bounding box of an empty terrain");
  Box box;
  box.lo.setConstant(std::numeric_limits<double>::infinity());
  box.hi.setConstant(-std::numeric_limits<double>::infinity());
  for (const auto& s : surfaces)
    for (const auto& c : s.corners()) {
      box.lo = box.lo.cwiseMin(c);
      box.hi = box.hi.cwiseMax(c);
    }
  box.lo.array() -= margin;
  box.hi.array() += margin;
  return box;
}

Eigen::VectorXd big_m_constants(const HalfspaceSystem& hs, const Box& box) {
  if (!box.finite()) throw std::invalid_argument("big-M needs a finite bounding box");
  Eigen::VectorXd M(hs.rows());
  for (int i = 0; i < hs.rows(); ++i) {
    double mx = -hs.b[i];
    for (int j = 0; j < 3; ++j) mx += std::max(hs.A(i, j) * box.lo[j], hs.A(i, j) * box.hi[j]);
    M[i] = std::max(mx, 0.0);
  }
  return M;
}

int big_m_link(ProgramBuilder& b, const LinExpr& H, const HalfspaceSystem& hs, const Box& box, const E3& p) {
  const Eigen::VectorXd M = big_m_constants(hs, box);
  const bool constant = H.terms.empty();
  if (constant && H.constant == 0.0) return 0;
  auto row = [&](int i) {
    return hs.A(i, 0) * p[0] + hs.A(i, 1) * p[1] + hs.A(i, 2) * p[2] - hs.b[i];
  };
  int rows = 0;
  if (constant && H.constant == 1.0) {
    for (int i = 0; i < hs.lateral_rows; ++i, ++rows) b.add_le(row(i));
    b.add_eq(row(hs.lateral_rows));
    return rows + 1;
  }
  for (int i = 0; i < hs.rows(); ++i, ++rows) b.add_le(row(i) - M[i] * (1.0 - H));
  return rows;
}

}  // namespace cscp::mip
