#pragma once

#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "cscp/conic/solver.hpp"
#include "cscp/relax/relax.hpp"

namespace cscp::mip {

// Reachability of a contact relative to the previous contact in plan order.
struct ReachSettings {
  // Linear model: step_min <= p_c - p_prev <= step_max (world frame).
  Eigen::Vector3d step_min = Eigen::Vector3d(-0.5, -0.5, -0.3);
  Eigen::Vector3d step_max = Eigen::Vector3d(0.5, 0.5, 0.3);
  // Rotated model: ||p_c,xy - (p_prev,xy + R(yaw_prev) o_i)|| <= d_i for both foci.
  Eigen::Vector2d focus1 = Eigen::Vector2d::Zero();
  Eigen::Vector2d focus2 = Eigen::Vector2d::Zero();
  double radius1 = 0.5;
  double radius2 = 0.5;
};

struct MipSettings {
  double gap_tol = 1e-4;
  int node_limit = 20000;
  // Relaxation solves per node (n_I); later solves are anchored at the previous one.
  int iters_per_node = 1;
  relax::Mode relaxation = relax::Mode::TrustRegion;
  double rho0 = 1.0;
  double nu = 0.65;
  double soft_penalty = 1e5;
  double slack_weight = 0.1;
  double anchored_slack_weight = 30.0;
  // Force box per contact in multiples of m |g|; it also bounds the friction rows.
  double force_limit = 2.0;
  // Margin around the terrain bounding box that bounds the contact positions.
  double box_margin = 0.25;
  bool rotated_reach = false;
  // Per endeffector; an empty list uses the defaults for every endeffector.
  std::vector<ReachSettings> reach;
  int yaw_segments = 5;
  double yaw_min = -std::numbers::pi / 2.0;
  double yaw_max = std::numbers::pi / 2.0;
  double max_yaw_step = 0.6;
  // Worker threads; 0 uses the hardware concurrency. CSCP_THREADS caps either value.
  int threads = 1;
  conic::SolverSettings solver;

  const ReachSettings& reach_for(int endeffector) const {
    static const ReachSettings defaults;
    if (reach.empty()) return defaults;
    return reach[static_cast<std::size_t>(endeffector) < reach.size() ? endeffector : 0];
  }
};

}  // namespace cscp::mip
