#include "cscp/model/feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace cscp::model {

double ViolationReport::max() const { return std::max({friction, cop, timestep, reach, membership}); }

double friction_violation(const Mat3& R, const Vec3& f, double mu) {
  const Vec3 F = R.transpose() * f;
  return std::max(0.0, std::hypot(F.x(), F.y()) - mu * F.z());
}

ViolationReport check_feasibility(const Trajectory& traj, const ProblemSpec& spec) {
  ViolationReport v;
  const int N = traj.horizon();
  for (int t = 1; t <= N; ++t) {
    const double dt = traj.timesteps[t - 1];
    v.timestep = std::max({v.timestep, spec.dt_min - dt, dt - spec.dt_max});
    const Vec3& com = traj.states[t].com;
    for (int e = 0; e < spec.num_endeffectors(); ++e) {
      const auto& s = traj.samples[t - 1][e];
      if (!s.active) continue;
      const auto& ee = spec.endeffectors[e];
      v.friction = std::max(v.friction, friction_violation(spec.rotation(e, t), s.wrench.force, spec.friction_at(e, t)));
      const Vec2& z = s.wrench.cop;
      v.cop = std::max({v.cop, (z - ee.cop_max).maxCoeff(), (ee.cop_min - z).maxCoeff()});
      v.reach = std::max(v.reach, (s.position - com).norm() - ee.max_reach);
      const int r = spec.schedule.surface(e, t);
      if (r >= 0) v.membership = std::max(v.membership, spec.surfaces[r].membership_violation(s.position));
    }
  }
  return v;
}

}  // namespace cscp::model
