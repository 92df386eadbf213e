#include "cscp/scp/scp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>

#include "cscp/conic/dump.hpp"

namespace cscp::scp {

std::string_view to_string(ScpStatus s) {
  switch (s) {
    case ScpStatus::Converged: return "converged";
    case ScpStatus::NotConverged: return "not_converged";
    case ScpStatus::Infeasible: return "infeasible";
    case ScpStatus::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Usable despite an early stop when the residuals are within a loose tolerance.
bool usable(const conic::ConicSolution& s) {
  if (s.status == conic::Status::Optimal) return true;
  if (s.status != conic::Status::IterationLimit && s.status != conic::Status::NumericalFailure) return false;
  return s.primal.allFinite() && s.kkt.primal <= 1e-6 && s.kkt.dual <= 1e-6 && s.kkt.gap <= 1e-6;
}

}  // namespace

ScpReport solve_scp(const model::ProblemSpec& spec, const ScpSettings& settings) {
  spec.validate();
  const auto t_start = Clock::now();
  ScpReport report;
  report.relaxation = settings.relaxation;

  relax::RelaxationState state;
  state.mode = settings.relaxation;
  state.rho0 = settings.rho0;
  state.nu = settings.nu;
  state.soft_penalty = settings.soft_penalty;
  state.slack_weight = settings.slack_weight;

  std::optional<conic::ConicSolution> warm;
  double prev_eps = std::numeric_limits<double>::infinity();
  if (settings.dump_dir) std::filesystem::create_directories(*settings.dump_dir);

  if (settings.nominal_anchor) {
    state.iteration = 1;
    const Subproblem probe = build_subproblem(spec, settings, state);
    state.nominal_point = embed_trajectory(probe, spec, nominal_guess(spec));
  }

  for (int k = 1; k <= settings.max_outer_iters; ++k) {
    const auto t0 = Clock::now();
    state.iteration = k;
    state.slack_weight = k == 1 ? settings.slack_weight : settings.anchored_slack_weight;
    Subproblem sub = build_subproblem(spec, settings, state);
    if (settings.dump_dir)
      conic::write_program(sub.program, *settings.dump_dir / ("iteration_" + std::to_string(k) + ".json"));

    const bool can_warm = settings.warm_start && warm && warm->primal.size() == sub.program.num_vars() &&
                          warm->slack.size() == sub.program.ineq_rhs.size() &&
                          warm->dual_eq.size() == sub.program.eq_rhs.size();
    conic::ConicSolution sol = conic::solve(sub.program, settings.solver, can_warm ? warm : std::nullopt);

    IterationRecord rec;
    rec.iteration = k;
    if (!usable(sol) && sol.status != conic::Status::PrimalInfeasible &&
        sol.status != conic::Status::DualInfeasible) {
      // Cold restart with a doubled trust radius.
      relax::RelaxationState retry = state;
      retry.rho0 *= 2.0;
      sub = build_subproblem(spec, settings, retry);
      sol = conic::solve(sub.program, settings.solver);
      rec.recovered = true;
    }
    rec.solver_status = sol.status;
    rec.solver_iterations = sol.iterations;
    rec.schedule_value = state.mode == relax::Mode::TrustRegion ? state.trust_radius() : state.soft_penalty;

    if (sol.status == conic::Status::PrimalInfeasible || sol.status == conic::Status::DualInfeasible) {
      rec.wall_time = seconds_since(t0);
      report.iterations.push_back(rec);
      report.status = ScpStatus::Infeasible;
      report.failed_iteration = k;
      break;
    }
    if (!usable(sol)) {
      rec.wall_time = seconds_since(t0);
      report.iterations.push_back(rec);
      report.status = ScpStatus::SolverFailure;
      report.failed_iteration = k;
      break;
    }

    const conic::Vec& x = sol.primal;
    report.candidate = extract_trajectory(sub, spec, x);
    report.trajectory = model::integrate(spec, report.candidate);
    rec.eps = model::convergence_error(report.candidate, report.trajectory);
    rec.eps_normalized = model::mass_normalized(rec.eps, spec.mass);
    rec.objective = sol.objective;
    rec.cost = sub.cost(x);
    for (const auto& a : sub.atoms) {
      const auto gap = relax::relaxation_gap(a, x);
      rec.max_relaxation_gap = std::max({rec.max_relaxation_gap, std::abs(gap[0]), std::abs(gap[1])});
    }
    rec.wall_time = seconds_since(t0);
    report.iterations.push_back(rec);

    const bool small = rec.eps.eps <= settings.eps_tol;
    const bool stalled = k > 1 && std::abs(rec.eps.eps - prev_eps) <= settings.eps_stall_tol;
    if (small || stalled) {
      report.status = ScpStatus::Converged;
      report.converged = true;
      break;
    }
    prev_eps = rec.eps.eps;
    state.anchor_point = x;
    warm = sol;
  }
  report.total_time = seconds_since(t_start);
  return report;
}

}  // namespace cscp::scp
