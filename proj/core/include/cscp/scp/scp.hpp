#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cscp/model/integrate.hpp"
#include "cscp/scp/builder.hpp"

namespace cscp::scp {

enum class ScpStatus { Converged, NotConverged, Infeasible, SolverFailure };
std::string_view to_string(ScpStatus s);

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;  // relaxed conic objective
  double cost = 0.0;       // weighted cost terms only
  model::ErrorReport eps;
  model::ErrorReport eps_normalized;
  conic::Status solver_status = conic::Status::NumericalFailure;
  int solver_iterations = 0;
  double wall_time = 0.0;
  double schedule_value = 0.0;  // rho in trust-region mode, eta in soft mode
  double max_relaxation_gap = 0.0;
  bool recovered = false;
};

struct ScpReport {
  std::vector<IterationRecord> iterations;
  ScpStatus status = ScpStatus::NotConverged;
  bool converged = false;
  int failed_iteration = -1;
  relax::Mode relaxation = relax::Mode::TrustRegion;
  // Trust-region cuts bound both substitution variables of each atom.
  std::string cut_sides = "plus_and_minus";
  model::Trajectory candidate;   // decision-variable trajectory of the last solve
  model::Trajectory trajectory;  // controls of the last solve integrated exactly
  double total_time = 0.0;

  int total_iterations() const { return static_cast<int>(iterations.size()); }
  const IterationRecord& last() const { return iterations.back(); }
};

ScpReport solve_scp(const model::ProblemSpec& spec, const ScpSettings& settings);

}  // namespace cscp::scp
