#pragma once

#include "cscp/model/types.hpp"

namespace cscp::model {

struct ViolationReport {
  double friction = 0.0;
  double cop = 0.0;
  double timestep = 0.0;
  double reach = 0.0;
  double membership = 0.0;

  double max() const;
  bool ok(double tol) const { return max() <= tol; }
};

// Largest violation per constraint family over all active (e, t).
ViolationReport check_feasibility(const Trajectory& traj, const ProblemSpec& spec);

// max(0, ||F_xy|| - mu F_z) for the local force F = R' f.
double friction_violation(const Mat3& R, const Vec3& f, double mu);

}  // namespace cscp::model
