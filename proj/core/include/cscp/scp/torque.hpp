#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cscp/conic/program.hpp"
#include "cscp/model/types.hpp"

namespace cscp::scp {

// Scaled wrench [f; gamma] of an active (e, t) as affine expressions.
struct WrenchExpr {
  std::array<conic::LinExpr, 3> force;
  std::array<conic::LinExpr, 3> torque;
};

// Adds tau_min <= offset_t + sum_e D_{e,t} [f; gamma] <= tau_max for every step and joint whose
// bound is finite. `wrenches[t-1][e]` is empty for inactive endeffectors; `force_scale`
// converts the scaled wrench to SI units. Returns the number of rows added.
int apply_torque_limits(conic::ProgramBuilder& b, const model::TorqueLimitData& data,
                        const std::vector<std::vector<std::optional<WrenchExpr>>>& wrenches, double force_scale);

// Joint torques of a trajectory, [t-1] -> n_j.
std::vector<Eigen::VectorXd> joint_torques(const model::TorqueLimitData& data, const model::Trajectory& traj);

}  // namespace cscp::scp
