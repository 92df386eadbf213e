#pragma once

#include "cscp/model/types.hpp"

namespace cscp::model {

// gamma = (R_x z_x + R_y z_y) x f + R_z lambda
Vec3 contact_torque(const Mat3& R, const ContactWrench& w);

// Integrates the exact nonlinear dynamics from the controls (samples and timesteps of
// `controls`; its states are ignored). Torques are evaluated at the integrated CoM of
// the same step. Returned samples carry the derived torque and com_torque.
Trajectory integrate(const ProblemSpec& spec, const Trajectory& controls);

// Integrates control steps first..last (1-based, inclusive) from `start`; the result has
// last - first + 1 steps and states[0] == start.
Trajectory integrate_range(const ProblemSpec& spec, const Trajectory& controls, int first, int last,
                           const CentroidalState& start);

struct ErrorReport {
  double com = 0.0;
  double lin = 0.0;
  double ang = 0.0;
  double eps = 0.0;  // max of the three
};

// Mean over steps 1..N of squared state distances; throws on horizon mismatch.
ErrorReport convergence_error(const Trajectory& candidate, const Trajectory& integrated);
// Momentum terms divided by mass^2 (velocity-like units).
ErrorReport mass_normalized(const ErrorReport& raw, double mass);

}  // namespace cscp::model
