#include "cscp/io/plan_json.hpp"

#include <cmath>

namespace cscp::io {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json plan_to_json(const mip::MipResult& result, const model::ProblemSpec& spec) {
  json j;
  j["status"] = std::string(mip::to_string(result.status));
  j["has_incumbent"] = result.has_incumbent;
  j["objective"] = result.has_incumbent ? json(result.objective) : json(nullptr);
  j["lower_bound"] = finite_or_null(result.lower_bound);
  j["gap"] = finite_or_null(result.gap);
  j["nodes"] = result.nodes;

  json assignments = json::array();
  json footsteps = json::array();
  if (result.has_incumbent) {
    const auto& a = result.assignment;
    for (Eigen::Index row = 0; row < a.H.rows(); ++row)
      for (Eigen::Index r = 0; r < a.H.cols(); ++r)
        if (a.H(row, r) == 1) assignments.push_back({static_cast<int>(row), static_cast<int>(r)});
    const auto& phases = spec.schedule.phases();
    for (std::size_t c = 0; c < phases.size(); ++c) {
      const auto& ph = phases[c];
      footsteps.push_back({{"contact", static_cast<int>(c)},
                           {"endeffector", spec.endeffectors[ph.endeffector].id},
                           {"steps", {ph.first, ph.last}},
                           {"planned", ph.surface < 0},
                           {"surface", a.surface[c] >= 0 ? json(a.surface[c]) : json(nullptr)},
                           {"position", {a.positions[c].x(), a.positions[c].y(), a.positions[c].z()}},
                           {"yaw", a.yaw[c]}});
    }
  }
  j["assignment_rows"] = result.has_incumbent ? json(result.assignment.planned) : json::array();
  j["assignments"] = assignments;
  j["footsteps"] = footsteps;

  json bounds = json::array();
  for (const auto& b : result.bounds)
    bounds.push_back({{"lb", finite_or_null(b.lb)}, {"ub", finite_or_null(b.ub)}, {"nodes", b.nodes}});
  j["bounds"] = bounds;
  return j;
}

}  // namespace cscp::io
