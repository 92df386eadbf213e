#pragma once

#include <filesystem>
#include <string>

#include "cscp/model/types.hpp"

namespace cscp::testing {

inline std::filesystem::path scenario_path(const std::string& name) {
  return std::filesystem::path(CSCP_SCENARIO_DIR) / (name + ".json");
}

// Flat square of half-width h centred at (cx, cy) at height z.
model::TerrainSurface square(double cx, double cy, double z, double h, double friction = 0.7);

// Four feet on the ground around a 20 kg body, all active for N steps.
model::ProblemSpec static_stand(int N = 10);

// One endeffector on flat ground below the CoM, active for N steps.
model::ProblemSpec single_contact(int N, double mass = 1.0);

}  // namespace cscp::testing
