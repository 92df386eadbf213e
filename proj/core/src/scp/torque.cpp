#include "cscp/scp/torque.hpp"

#include <cmath>
#include <stdexcept>

namespace cscp::scp {

using conic::LinExpr;

int apply_torque_limits(conic::ProgramBuilder& b, const model::TorqueLimitData& data,
                        const std::vector<std::vector<std::optional<WrenchExpr>>>& wrenches, double force_scale) {
  const int nj = data.num_joints();
  if (data.tau_max.size() != nj) throw std::invalid_argument("torque bounds: size mismatch");
  if (data.offset.size() < wrenches.size() || data.maps.size() < wrenches.size())
    throw std::invalid_argument("torque data: fewer steps than the horizon");
  int rows = 0;
  for (std::size_t t = 0; t < wrenches.size(); ++t) {
    if (data.offset[t].size() != nj) throw std::invalid_argument("torque offset: size mismatch");
    for (int j = 0; j < nj; ++j) {
      LinExpr tau(data.offset[t][j]);
      for (std::size_t e = 0; e < wrenches[t].size(); ++e) {
        if (!wrenches[t][e] || e >= data.maps[t].size() || data.maps[t][e].size() == 0) continue;
        const auto& D = data.maps[t][e];
        if (D.rows() != nj || D.cols() != 6) throw std::invalid_argument("torque map: shape mismatch");
        for (int i = 0; i < 3; ++i) {
          tau += (force_scale * D(j, i)) * wrenches[t][e]->force[i];
          tau += (force_scale * D(j, 3 + i)) * wrenches[t][e]->torque[i];
        }
      }
      // Rows are divided by force_scale to keep them on the scale of the wrench variables.
      if (std::isfinite(data.tau_max[j])) {
        b.add_le((1.0 / force_scale) * (tau - data.tau_max[j]));
        ++rows;
      }
      if (std::isfinite(data.tau_min[j])) {
        b.add_le((1.0 / force_scale) * (LinExpr(data.tau_min[j]) - tau));
        ++rows;
      }
    }
  }
  return rows;
}

std::vector<Eigen::VectorXd> joint_torques(const model::TorqueLimitData& data, const model::Trajectory& traj) {
  std::vector<Eigen::VectorXd> out;
  for (int t = 1; t <= traj.horizon(); ++t) {
    Eigen::VectorXd tau = data.offset[t - 1];
    for (std::size_t e = 0; e < traj.samples[t - 1].size(); ++e) {
      const auto& s = traj.samples[t - 1][e];
      if (!s.active || e >= data.maps[t - 1].size() || data.maps[t - 1][e].size() == 0) continue;
      Eigen::Matrix<double, 6, 1> w;
      w << s.wrench.force, s.wrench.torque;
      tau += data.maps[t - 1][e] * w;
    }
    out.push_back(std::move(tau));
  }
  return out;
}

}  // namespace cscp::scp
