#pragma once

#include <nlohmann/json.hpp>

#include "cscp/mip/bnb.hpp"

namespace cscp::io {

// {status, objective, lower_bound, gap, nodes, assignments: [[row, surface]...],
//  footsteps: [{contact, endeffector, position, yaw, surface}], bounds: [{lb, ub, nodes}]}
nlohmann::json plan_to_json(const mip::MipResult& result, const model::ProblemSpec& spec);

}  // namespace cscp::io
