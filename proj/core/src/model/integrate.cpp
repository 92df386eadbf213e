#include "cscp/model/integrate.hpp"

#include <algorithm>
#include <stdexcept>

namespace cscp::model {

Vec3 contact_torque(const Mat3& R, const ContactWrench& w) {
  const Vec3 lever = R.col(0) * w.cop.x() + R.col(1) * w.cop.y();
  return lever.cross(w.force) + R.col(2) * w.normal_torque;
}

Trajectory integrate_range(const ProblemSpec& spec, const Trajectory& controls, int first, int last,
                           const CentroidalState& start) {
  if (first < 1 || last > controls.horizon() || first > last + 1)
    throw std::invalid_argument("integration range outside the controls");
  const int ne = spec.num_endeffectors();
  const double m = spec.mass;
  const Vec3 weight = m * spec.gravity;

  Trajectory out;
  out.states.reserve(last - first + 2);
  out.states.push_back(start);
  CentroidalState x = start;
  for (int t = first; t <= last; ++t) {
    const double dt = controls.timesteps[t - 1];
    auto samples = controls.samples[t - 1];
    Vec3 fsum = Vec3::Zero();
    for (int e = 0; e < ne; ++e)
      if (samples[e].active) fsum += samples[e].wrench.force;
    x.lin_momentum = x.lin_momentum + (weight + fsum) * dt;
    x.com = x.com + x.lin_momentum * (dt / m);
    Vec3 ksum = Vec3::Zero();
    for (int e = 0; e < ne; ++e) {
      auto& s = samples[e];
      if (!s.active) continue;
      s.wrench.torque = contact_torque(spec.rotation(e, t), s.wrench);
      s.wrench.com_torque = (s.position - x.com).cross(s.wrench.force) + s.wrench.torque;
      ksum += s.wrench.com_torque;
    }
    x.ang_momentum = x.ang_momentum + ksum * dt;
    out.states.push_back(x);
    out.timesteps.push_back(dt);
    out.samples.push_back(std::move(samples));
  }
  return out;
}

Trajectory integrate(const ProblemSpec& spec, const Trajectory& controls) {
  return integrate_range(spec, controls, 1, controls.horizon(), spec.initial_state);
}

ErrorReport convergence_error(const Trajectory& candidate, const Trajectory& integrated) {
  if (candidate.states.size() != integrated.states.size() || candidate.states.size() < 2)
    throw std::invalid_argument("convergence_error: horizon mismatch");
  const std::size_t N = candidate.states.size() - 1;
  ErrorReport r;
  for (std::size_t t = 1; t <= N; ++t) {
    const auto& a = candidate.states[t];
    const auto& b = integrated.states[t];
    r.com += (a.com - b.com).squaredNorm();
    r.lin += (a.lin_momentum - b.lin_momentum).squaredNorm();
    r.ang += (a.ang_momentum - b.ang_momentum).squaredNorm();
  }
  r.com /= static_cast<double>(N);
  r.lin /= static_cast<double>(N);
  r.ang /= static_cast<double>(N);
  r.eps = std::max({r.com, r.lin, r.ang});
  return r;
}

ErrorReport mass_normalized(const ErrorReport& raw, double mass) {
  ErrorReport r = raw;
  r.lin /= mass * mass;
  r.ang /= mass * mass;
  r.eps = std::max({r.com, r.lin, r.ang});
  return r;
}

}  // namespace cscp::model
