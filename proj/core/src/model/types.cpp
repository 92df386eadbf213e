#include "cscp/model/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cscp::model {

ContactSchedule::ContactSchedule(int horizon, int num_endeffectors, std::vector<ContactPhase> phases)
    : horizon_(horizon), num_ee_(num_endeffectors), phases_(std::move(phases)) {
  if (horizon_ < 1) throw std::invalid_argument("horizon must be at least 1");
  lookup_.assign(static_cast<std::size_t>(horizon_) * num_ee_, -1);
  for (std::size_t k = 0; k < phases_.size(); ++k) {
    const auto& ph = phases_[k];
    if (ph.endeffector < 0 || ph.endeffector >= num_ee_)
      throw std::invalid_argument("phase refers to unknown endeffector");
    if (ph.first < 1 || ph.last > horizon_ || ph.first > ph.last)
      throw std::invalid_argument("phase step range outside the horizon");
    for (int t = ph.first; t <= ph.last; ++t) {
      int& slot = lookup_[(t - 1) * num_ee_ + ph.endeffector];
      if (slot >= 0) throw std::invalid_argument("overlapping phases for one endeffector");
      slot = static_cast<int>(k);
    }
  }
}

int ContactSchedule::surface(int e, int t) const {
  const int k = phase_at(e, t);
  return k < 0 ? -1 : phases_[k].surface;
}

const Mat3& ProblemSpec::rotation(int e, int t) const {
  static const Mat3 identity = Mat3::Identity();
  const int r = schedule.surface(e, t);
  return r < 0 ? identity : surfaces[r].rotation();
}

double ProblemSpec::friction_at(int e, int t) const {
  const int r = schedule.surface(e, t);
  return r < 0 ? friction : surfaces[r].friction();
}

void ProblemSpec::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
  if (!(mass > 0.0)) fail("mass must be positive");
  if (!gravity.allFinite()) fail("gravity must be finite");
  if (!(friction > 0.0)) fail("friction must be positive");
  if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max)) fail("require 0 < dt_min <= dt_init <= dt_max");
  if (schedule.horizon() < 1) fail("horizon must be at least 1");
  if (schedule.num_endeffectors() != num_endeffectors()) fail("schedule and endeffector count differ");
  for (const auto& ee : endeffectors) {
    if (!(ee.cop_min.array() <= ee.cop_max.array()).all()) fail("cop bounds inverted for " + ee.id);
    if (!(ee.max_reach > 0.0)) fail("max_reach must be positive for " + ee.id);
  }
  for (const auto& ph : schedule.phases())
    if (ph.surface < 0 || ph.surface >= static_cast<int>(surfaces.size()))
      fail("phase of " + endeffectors[ph.endeffector].id + " has no valid surface assignment");
  if (!initial_state.com.allFinite() || !initial_state.lin_momentum.allFinite() ||
      !initial_state.ang_momentum.allFinite())
    fail("initial state must be finite");
  const auto n = static_cast<std::size_t>(horizon());
  if (!references.lin_momentum.empty() && references.lin_momentum.size() != n) fail("lin_momentum reference length");
  if (!references.ang_momentum.empty() && references.ang_momentum.size() != n) fail("ang_momentum reference length");
  if (!references.endeffector_positions.empty()) {
    if (references.endeffector_positions.size() != endeffectors.size()) fail("endeffector reference count");
    for (const auto& r : references.endeffector_positions)
      if (!r.empty() && r.size() != n) fail("endeffector reference length");
  }
  if (torque_limits) {
    const auto& tl = *torque_limits;
    if (tl.offset.size() != n || tl.maps.size() != n) fail("torque limit data must cover every step");
    if (tl.tau_max.size() != tl.tau_min.size()) fail("torque bound sizes differ");
    if (!(tl.tau_min.array() <= tl.tau_max.array()).all()) fail("torque bounds inverted");
    for (std::size_t t = 0; t < n; ++t) {
      if (tl.offset[t].size() != tl.num_joints()) fail("torque offset size");
      if (tl.maps[t].size() != endeffectors.size()) fail("torque map count");
      for (const auto& D : tl.maps[t])
        if (D.size() != 0 && (D.rows() != tl.num_joints() || D.cols() != 6)) fail("torque map shape");
    }
  }
}

Trajectory make_controls(const ProblemSpec& spec) {
  const int N = spec.horizon();
  const int ne = spec.num_endeffectors();
  Trajectory tr;
  tr.states.assign(N + 1, spec.initial_state);
  tr.timesteps.assign(N, spec.dt_init);
  tr.samples.assign(N, std::vector<EndeffectorSample>(ne));
  for (int t = 1; t <= N; ++t)
    for (int e = 0; e < ne; ++e) {
      const int k = spec.schedule.phase_at(e, t);
      if (k < 0) continue;
      auto& smp = tr.samples[t - 1][e];
      smp.active = true;
      smp.position = spec.schedule.phases()[k].position;
    }
  return tr;
}

}  // namespace cscp::model
