#pragma once

#include "cscp/conic/program.hpp"

namespace cscp::testing {

// First-order reference solver for small dense cone programs. ADMM on
//   min c'x  s.t.  [A; G] x + z = [b; h],  z in {0} x K,
// with over-relaxation and residual balancing of the penalty. It shares no code with the
// interior-point solver beyond the cone projection, which has its own closed-form tests.
struct OracleResult {
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  conic::Vec x;
  conic::Vec y;  // multipliers of [A; G]: c + A'y_eq + G'y_ineq = 0, y_ineq in K
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

struct OracleSettings {
  double tol = 1e-10;
  int max_iters = 400000;
  double alpha = 1.6;
  double sigma = 1e-6;
};

OracleResult admm_oracle(const conic::ConicProgram& prog, const OracleSettings& settings = {});

}  // namespace cscp::testing
