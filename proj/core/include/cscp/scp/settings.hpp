#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "cscp/conic/solver.hpp"
#include "cscp/relax/relax.hpp"

namespace cscp::scp {

struct ScpSettings {
  bool optimize_time = false;
  bool optimize_contacts = false;
  bool torque_limits = false;
  relax::Mode relaxation = relax::Mode::TrustRegion;
  int max_outer_iters = 30;
  double eps_tol = 1e-4;
  double eps_stall_tol = 1e-6;
  bool warm_start = true;
  double rho0 = 1.0;
  double nu = 0.65;
  double soft_penalty = 1e5;
  // Linear weight on the relaxation slack of every atom: first iteration (no anchor) and later ones.
  double slack_weight = 0.1;
  double anchored_slack_weight = 30.0;
  // Linearise the first-iteration slack term at a straight-line nominal guess instead of 0.
  bool nominal_anchor = true;
  conic::SolverSettings solver;
  std::optional<std::filesystem::path> dump_dir;
};

}  // namespace cscp::scp
