#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "cscp/model/terrain.hpp"

namespace cscp::model {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct CentroidalState {
  Vec3 com = Vec3::Zero();
  Vec3 lin_momentum = Vec3::Zero();
  Vec3 ang_momentum = Vec3::Zero();
};

struct EndeffectorConfig {
  std::string id;
  Vec2 cop_min = Vec2::Zero();
  Vec2 cop_max = Vec2::Zero();
  double max_reach = 1.0;
  bool is_hand = false;
};

// One contiguous stance of an endeffector over control steps [first, last] (1-based).
struct ContactPhase {
  int endeffector = 0;
  int first = 1;
  int last = 1;
  int surface = -1;
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;  // heading about the world z axis, used by the contact planner
};

class ContactSchedule {
 public:
  ContactSchedule() = default;
  ContactSchedule(int horizon, int num_endeffectors, std::vector<ContactPhase> phases);

  int horizon() const { return horizon_; }
  int num_endeffectors() const { return num_ee_; }
  const std::vector<ContactPhase>& phases() const { return phases_; }
  std::vector<ContactPhase>& phases() { return phases_; }
  // Phase index active for (e, t) with t in 1..N, or -1.
  int phase_at(int e, int t) const { return lookup_[(t - 1) * num_ee_ + e]; }
  bool active(int e, int t) const { return phase_at(e, t) >= 0; }
  int surface(int e, int t) const;

 private:
  int horizon_ = 0;
  int num_ee_ = 0;
  std::vector<ContactPhase> phases_;
  std::vector<int> lookup_;
};

// Weights for the quadratic cost terms; targets are absolute terminal values.
struct CostWeights {
  double com_terminal = 1e4;
  double time_regularization = 1e3;
  double momenta_terminal = 1e2;
  double endeffector_consensus = 1.0;
  double momenta_consensus = 1.0;
  double momenta_rate = 1e-1;
  double momenta_running = 1e-2;
  double force = 1e-3;
  double torque = 1e-3;
};

struct References {
  std::optional<Vec3> com_target;
  Vec3 lin_momentum_target = Vec3::Zero();
  Vec3 ang_momentum_target = Vec3::Zero();
  // Kinematic consensus trajectories indexed by control step 1..N (entry t-1).
  std::vector<Vec3> lin_momentum;
  std::vector<Vec3> ang_momentum;
  // Per endeffector, per control step.
  std::vector<std::vector<Vec3>> endeffector_positions;
};

// Joint torque tau_t = offset_t + sum_e D_{e,t} [f; gamma], bounded by [tau_min, tau_max].
struct TorqueLimitData {
  std::vector<Eigen::VectorXd> offset;                     // [t-1] -> n_j
  std::vector<std::vector<Eigen::MatrixXd>> maps;          // [t-1][e] -> n_j x 6 (empty if unused)
  Eigen::VectorXd tau_min;
  Eigen::VectorXd tau_max;
  int num_joints() const { return static_cast<int>(tau_min.size()); }
};

struct ProblemSpec {
  double mass = 1.0;
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
  double friction = 0.5;
  ContactSchedule schedule;
  std::vector<EndeffectorConfig> endeffectors;
  std::vector<TerrainSurface> surfaces;
  double dt_init = 0.1;
  double dt_min = 0.1;
  double dt_max = 0.1;
  CentroidalState initial_state;
  CostWeights weights;
  References references;
  std::optional<TorqueLimitData> torque_limits;

  int horizon() const { return schedule.horizon(); }
  int num_endeffectors() const { return static_cast<int>(endeffectors.size()); }
  // Contact frame for an active (e, t): the assigned surface frame.
  const Mat3& rotation(int e, int t) const;
  double friction_at(int e, int t) const;
  Vec3 com_target() const { return references.com_target.value_or(initial_state.com); }
  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

struct ContactWrench {
  Vec3 force = Vec3::Zero();
  Vec2 cop = Vec2::Zero();
  double normal_torque = 0.0;
  Vec3 torque = Vec3::Zero();      // gamma, about the contact point
  Vec3 com_torque = Vec3::Zero();  // kappa, about the CoM
};

struct EndeffectorSample {
  bool active = false;
  Vec3 position = Vec3::Zero();
  ContactWrench wrench;
};

struct Trajectory {
  std::vector<CentroidalState> states;                 // 0..N
  std::vector<double> timesteps;                       // [t-1] for t = 1..N
  std::vector<std::vector<EndeffectorSample>> samples; // [t-1][e]

  int horizon() const { return static_cast<int>(timesteps.size()); }
};

// Empty trajectory with the schedule's activity pattern and nominal contact points.
Trajectory make_controls(const ProblemSpec& spec);

}  // namespace cscp::model
