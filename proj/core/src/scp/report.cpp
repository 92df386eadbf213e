#include "cscp/scp/report.hpp"

namespace cscp::scp {

namespace {

nlohmann::json eps_json(const model::ErrorReport& e) {
  return {{"com", e.com}, {"lin", e.lin}, {"ang", e.ang}, {"eps", e.eps}};
}

}  // namespace

nlohmann::json report_to_json(const ScpReport& report, double mass) {
  nlohmann::json iters = nlohmann::json::array();
  for (const auto& it : report.iterations) {
    iters.push_back({{"iteration", it.iteration},
                     {"objective", it.objective},
                     {"cost", it.cost},
                     {"eps", eps_json(it.eps)},
                     {"eps_mass_normalized", eps_json(it.eps_normalized)},
                     {"solver_status", std::string(conic::to_string(it.solver_status))},
                     {"solver_iterations", it.solver_iterations},
                     {"wall_time", it.wall_time},
                     {report.relaxation == relax::Mode::TrustRegion ? "rho" : "eta", it.schedule_value},
                     {"max_relaxation_gap", it.max_relaxation_gap},
                     {"recovered", it.recovered}});
  }
  nlohmann::json j;
  j["iterations"] = iters;
  j["status"] = std::string(to_string(report.status));
  j["converged"] = report.converged;
  j["total_iterations"] = report.total_iterations();
  j["total_time"] = report.total_time;
  j["mass"] = mass;
  j["relaxation"] = report.relaxation == relax::Mode::TrustRegion ? "trust" : "soft";
  j["trust_cut_sides"] = report.cut_sides;
  if (report.failed_iteration >= 0) j["failed_iteration"] = report.failed_iteration;
  if (!report.iterations.empty()) {
    j["final_eps"] = report.last().eps.eps;
    j["final_cost"] = report.last().cost;
    j["final_objective"] = report.last().objective;
  }
  j["trajectory"] = "trajectory.csv";
  return j;
}

}  // namespace cscp::scp
