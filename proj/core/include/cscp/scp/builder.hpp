#pragma once

#include <vector>

#include "cscp/model/types.hpp"
#include "cscp/relax/relax.hpp"
#include "cscp/scp/settings.hpp"

namespace cscp::scp {

using conic::LinExpr;
using conic::Vec;

// Internal scaling: CoM in metres, momenta divided by mass, forces and normal torques
// divided by mass * |g|, timesteps divided by dt_init.
struct Scaling {
  double mass = 1.0;
  double force = 1.0;  // mass * |g|
  double dt0 = 0.1;
};

// Column indices of the decision variables; -1 marks quantities that are constants.
struct VariableMap {
  int horizon = 0;
  int num_ee = 0;
  std::vector<int> com, lin, ang;       // [t-1] -> first of 3
  std::vector<int> dt;                  // [t-1] -> scaled timestep, or -1
  std::vector<int> force, cop, lambda;  // [(t-1)*ne+e]
  std::vector<int> position;            // [phase] -> first of 3, or -1
  std::vector<int> kappa_atoms;         // [(t-1)*ne+e] -> first of 3 atoms in `atoms`
  std::vector<int> gamma_atoms;         // [(t-1)*ne+e] -> first of 3 atoms, or -1
  std::vector<int> time_atoms;          // [t-1] -> first of 9 atoms, or -1

  int slot(int t, int e) const { return (t - 1) * num_ee + e; }
};

struct CostTerm {
  double weight = 0.0;
  std::vector<LinExpr> residual;
};

struct RowCounts {
  int dynamics_eq = 0;
  int timestep_rows = 0;
  int membership_rows = 0;
  int cop_rows = 0;
  int friction_socs = 0;
  int reach_socs = 0;
  int torque_rows = 0;
  int trust_cuts = 0;
  int soft_penalties = 0;
};

struct Subproblem {
  conic::ConicProgram program;
  VariableMap map;
  Scaling scaling;
  std::vector<relax::BilinearAtom> atoms;
  std::vector<CostTerm> costs;  // cost terms only, without relaxation penalties
  RowCounts rows;

  // Sum of weighted squared residuals of the cost terms at x.
  double cost(const Vec& x) const;
};

Subproblem build_subproblem(const model::ProblemSpec& spec, const ScpSettings& settings,
                            const relax::RelaxationState& state);

// Candidate trajectory (decision-variable states and controls, SI units) from a primal point.
model::Trajectory extract_trajectory(const Subproblem& sub, const model::ProblemSpec& spec, const Vec& x);

// Straight-line CoM from the initial state to the target with weight shared evenly by the
// active contacts and nominal timesteps.
model::Trajectory nominal_guess(const model::ProblemSpec& spec);

// A primal point that reproduces the given trajectory on every state/control column and sets
// each substitution variable to its exact quadratic value; epigraph columns are left at zero.
Vec embed_trajectory(const Subproblem& sub, const model::ProblemSpec& spec, const model::Trajectory& traj);

}  // namespace cscp::scp
