#pragma once

#include <limits>
#include <vector>

#include "cscp/mip/contact_model.hpp"

namespace cscp::testing {

// Exhaustive oracle for the contact planner: every surface assignment of the planned contacts is
// pinned and solved as a node. Linear reachability only (no yaw binaries).
struct Enumerated {
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> choice;  // per planned contact, in plan order
  int feasible = 0;
  int assignments = 0;
};

Enumerated enumerate_assignments(const mip::ContactProblem& problem);

// Monopod stepping from a fixed stance on surface 0 onto `planned` later stances (at most 3).
model::ProblemSpec monopod(std::vector<model::TerrainSurface> surfaces, int planned);

// Three small squares: the start pad and two stones ahead of it.
std::vector<model::TerrainSurface> three_squares();

}  // namespace cscp::testing
