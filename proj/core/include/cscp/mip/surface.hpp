#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "cscp/conic/program.hpp"
#include "cscp/model/terrain.hpp"

namespace cscp::mip {

using conic::LinExpr;
using conic::ProgramBuilder;
using E3 = std::array<LinExpr, 3>;

// Stacked membership rows A p <= b: the lateral edge rows first, then n.p <= d and -n.p <= -d.
struct HalfspaceSystem {
  Eigen::MatrixX3d A;
  Eigen::VectorXd b;
  int lateral_rows = 0;

  int rows() const { return static_cast<int>(b.size()); }
  // Per-row positive part of A p - b.
  Eigen::VectorXd violation(const Eigen::Vector3d& p) const;
};

HalfspaceSystem surface_halfspaces(const model::TerrainSurface& surface);

// Axis-aligned box used to bound contact positions for the big-M constants.
struct Box {
  Eigen::Vector3d lo = Eigen::Vector3d::Zero();
  Eigen::Vector3d hi = Eigen::Vector3d::Zero();

  bool finite() const { return lo.allFinite() && hi.allFinite() && (hi.array() >= lo.array()).all(); }
  bool contains(const Eigen::Vector3d& p, double tol = 0.0) const;
};

// Bounding box of all surface corners grown by margin on every side.
Box terrain_bounding_box(const std::vector<model::TerrainSurface>& surfaces, double margin);

// Smallest M_i with a_i.p - b_i <= M_i for every p in the box (never negative).
Eigen::VectorXd big_m_constants(const HalfspaceSystem& hs, const Box& box);

// Emits a_i.p - b_i <= M_i (1 - H). A constant H = 1 yields the plain rows with the plane pair as
// one equality; a constant H = 0 emits nothing. Throws if the box is not finite. Returns the row count.
int big_m_link(ProgramBuilder& b, const LinExpr& H, const HalfspaceSystem& hs, const Box& box, const E3& p);

}  // namespace cscp::mip
