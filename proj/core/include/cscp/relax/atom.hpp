#pragma once

#include <array>
#include <string>
#include <vector>

#include "cscp/conic/program.hpp"

namespace cscp::relax {

using conic::LinExpr;
using conic::ProgramBuilder;
using conic::Vec;

// left . right = 1/4 (plus - minus) with plus = ||left + right||^2, minus = ||left - right||^2
// at any exactly feasible point.
struct BilinearAtom {
  std::vector<LinExpr> left;
  std::vector<LinExpr> right;
  int plus_var = -1;
  int minus_var = -1;

  std::vector<LinExpr> sum() const;
  std::vector<LinExpr> diff() const;
  // 1/4 (plus_var - minus_var), the affine stand-in for the product.
  LinExpr product() const;

  double exact_product(const Vec& x) const;
  double exact_plus(const Vec& x) const;
  double exact_minus(const Vec& x) const;
};

// Allocates plus/minus substitution variables for left . right.
BilinearAtom make_atom(ProgramBuilder& b, std::vector<LinExpr> left, std::vector<LinExpr> right,
                       const std::string& tag = "atom");

// (lever x force)_i = a^i . b^i with a^x = (-lever_z, lever_y), b^x = (force_y, force_z),
// a^y = (lever_z, -lever_x), b^y = (force_x, force_z), a^z = (-lever_y, lever_x), b^z = (force_x, force_y).
std::array<BilinearAtom, 3> decompose_cross_product(ProgramBuilder& b, const std::array<LinExpr, 3>& lever,
                                                    const std::array<LinExpr, 3>& force,
                                                    const std::string& tag = "cross");

// Per-component scalar atoms for l^i * dt, (sum kappa)^i * dt and (sum f)^i * dt.
struct TimeAtoms {
  std::array<BilinearAtom, 3> momentum;
  std::array<BilinearAtom, 3> torque;
  std::array<BilinearAtom, 3> force;
};
TimeAtoms decompose_time_bilinears(ProgramBuilder& b, const std::array<LinExpr, 3>& lin_momentum,
                                   const std::array<LinExpr, 3>& torque_sum,
                                   const std::array<LinExpr, 3>& force_sum, const LinExpr& dt);

// Plain-number forms of the cross-product split for checking the identity.
struct NumericAtom {
  Eigen::Vector2d a, b;
};
std::array<NumericAtom, 3> cross_atoms(const Eigen::Vector3d& lever, const Eigen::Vector3d& force);

}  // namespace cscp::relax
