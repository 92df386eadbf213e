#pragma once

#include <cstdint>
#include <vector>

#include "cscp/conic/solver.hpp"
#include "cscp/mip/reach.hpp"
#include "cscp/mip/settings.hpp"
#include "cscp/mip/surface.hpp"
#include "cscp/model/types.hpp"

namespace cscp::mip {

// A binary of the planner: surface selector H (index < num_surfaces), then the sine and cosine
// segment selectors of the rotated reachability model.
struct BinaryKey {
  int contact = 0;  // schedule phase index
  int index = 0;
};

// Per binary: -1 free (relaxed to [0, 1]), otherwise pinned to 0 or 1.
using Fixings = std::vector<std::int8_t>;

// Planning view of a schedule: every phase is a contact; phases with a surface are fixed,
// the others are placed by the planner. Plan order sorts contacts by start step then endeffector.
class ContactProblem {
 public:
  ContactProblem(model::ProblemSpec spec, MipSettings settings);

  const model::ProblemSpec& spec() const { return spec_; }
  const MipSettings& settings() const { return settings_; }
  int num_contacts() const { return static_cast<int>(spec_.schedule.phases().size()); }
  int num_surfaces() const { return static_cast<int>(spec_.surfaces.size()); }
  bool fixed(int contact) const { return spec_.schedule.phases()[contact].surface >= 0; }
  const std::vector<int>& plan_order() const { return order_; }
  int previous(int contact) const { return previous_[contact]; }
  // Planned contacts in plan order.
  const std::vector<int>& planned() const { return planned_; }
  const std::vector<BinaryKey>& binaries() const { return binaries_; }
  int num_binaries() const { return static_cast<int>(binaries_.size()); }
  // First binary of a planned contact, or -1.
  int first_binary(int contact) const { return first_binary_[contact]; }
  const YawModel& yaw_model() const { return yaw_; }
  const Box& box() const { return box_; }
  const HalfspaceSystem& halfspaces(int surface) const { return halfspaces_[surface]; }

  Fixings free_fixings() const { return Fixings(binaries_.size(), -1); }

 private:
  model::ProblemSpec spec_;
  MipSettings settings_;
  std::vector<int> order_, previous_, planned_, first_binary_;
  std::vector<BinaryKey> binaries_;
  YawModel yaw_;
  Box box_;
  std::vector<HalfspaceSystem> halfspaces_;
};

struct NodeSolution {
  conic::Status status = conic::Status::NumericalFailure;
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> binaries;          // values of every binary (fixed ones included)
  std::vector<Eigen::Vector3d> positions;  // per contact
  std::vector<double> yaw, sin, cos;       // per contact
  model::Trajectory trajectory;
  int solves = 0;
};

// Solves the node relaxation with the given fixings; iters_per_node solves, each anchored at the
// previous one. Infeasible fixings are reported without a solve.
NodeSolution solve_node(const ContactProblem& problem, const Fixings& fixings);

// Number of binaries farther than tol from {0, 1}.
int count_fractional(const std::vector<double>& values, double tol = 1e-6);

}  // namespace cscp::mip
