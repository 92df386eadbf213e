#pragma once

#include <optional>
#include <string_view>

#include "cscp/conic/program.hpp"

namespace cscp::conic {

struct SolverSettings {
  double tol = 1e-8;
  int max_iters = 100;
  double static_reg = 1e-8;
  int refine_steps = 1;
  double step_fraction = 0.99;
  int equilibration_passes = 10;
};

enum class Status { Optimal, PrimalInfeasible, DualInfeasible, IterationLimit, NumericalFailure };

std::string_view to_string(Status s);

struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

// Sign convention: stationarity reads c + A'y + G'z = 0 with z in K, so the dual
// objective is -b'y - h'z and the gap is |c'x + b'y + h'z|.
// PrimalInfeasible: (dual_eq, dual_ineq) hold a Farkas certificate with b'y + h'z = -1.
// DualInfeasible: (primal, slack) hold a ray with c'x = -1.
struct ConicSolution {
  Vec primal;
  Vec dual_eq;
  Vec dual_ineq;
  Vec slack;
  Status status = Status::NumericalFailure;
  KktResiduals kkt;
  double objective = 0.0;
  int iterations = 0;
  double certificate_residual = 0.0;
};

ConicSolution solve(const ConicProgram& prog, const SolverSettings& settings = {},
                    const std::optional<ConicSolution>& warm = std::nullopt);

// Residuals of a candidate primal-dual point, normalised as in the solver's stopping test.
KktResiduals kkt_residuals(const ConicProgram& prog, const Vec& x, const Vec& y, const Vec& z,
                           const Vec& s);

}  // namespace cscp::conic
