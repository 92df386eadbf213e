#pragma once

#include <filesystem>
#include <string>

#include "cscp/model/types.hpp"

namespace cscp::io {

// One row per state 0..N: t, dt, com, l, k, then per endeffector active, p, f, cop, lambda.
// Row 0 carries the initial state with dt = 0 and inactive endeffectors.
std::string trajectory_to_csv(const model::Trajectory& traj, const model::ProblemSpec& spec);
void write_trajectory_csv(const std::filesystem::path& path, const model::Trajectory& traj,
                          const model::ProblemSpec& spec);

// Inverse of trajectory_to_csv; the header must match the spec's endeffectors.
model::Trajectory parse_trajectory_csv(const std::string& text, const model::ProblemSpec& spec);
model::Trajectory read_trajectory_csv(const std::filesystem::path& path, const model::ProblemSpec& spec);

}  // namespace cscp::io
