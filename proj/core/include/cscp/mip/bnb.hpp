#pragma once

#include <string_view>
#include <vector>

#include "cscp/mip/contact_model.hpp"

namespace cscp::mip {

enum class MipStatus { Optimal, Infeasible, NodeLimit };
std::string_view to_string(MipStatus s);

struct ContactAssignment {
  std::vector<int> planned;                // contact (phase) index of every row of H
  Eigen::MatrixXi H;                       // planned contacts x surfaces
  Eigen::MatrixXi S, C;                    // segments x planned contacts (rotated reach only)
  std::vector<int> surface;                // per contact
  std::vector<Eigen::Vector3d> positions;  // per contact
  std::vector<double> yaw, sin, cos;       // per contact
};

struct BnBNode {
  Fixings fixings;
  double lower_bound = 0.0;  // parent relaxation bound until solved
  bool incumbent_feasible = false;
  int depth = 0;
  long id = 0;
  long parent = -1;
};

struct BoundRecord {
  double lb = 0.0;
  double ub = 0.0;
  int nodes = 0;
};

// Solved node: its own relaxation objective (infinity when infeasible) next to its parent's.
struct NodeRecord {
  long id = 0;
  long parent = -1;
  int depth = 0;
  double bound = 0.0;
  double parent_bound = 0.0;
  bool integral = false;
};

struct MipResult {
  MipStatus status = MipStatus::Infeasible;
  bool has_incumbent = false;
  ContactAssignment assignment;
  model::Trajectory trajectory;
  double objective = 0.0;
  double lower_bound = 0.0;
  double gap = 0.0;
  int nodes = 0;
  std::vector<BoundRecord> bounds;
  std::vector<NodeRecord> node_log;
};

// (ub - lb) / max(1, |ub|).
double relative_gap(double lb, double ub);

// Worker count after applying the CSCP_THREADS cap.
int worker_count(int requested);

// Best-first branch and bound over the node relaxations of solve_node.
MipResult plan_contacts(const model::ProblemSpec& spec, const MipSettings& settings);
MipResult plan_contacts(const ContactProblem& problem);

// Assignment of a fully integral node solution.
ContactAssignment make_assignment(const ContactProblem& problem, const NodeSolution& sol);

// The schedule with every planned contact placed on its assigned surface and position.
model::ProblemSpec apply_assignment(const model::ProblemSpec& spec, const ContactAssignment& assignment);

}  // namespace cscp::mip
