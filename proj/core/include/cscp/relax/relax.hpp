#pragma once

#include <optional>
#include <vector>

#include "cscp/relax/atom.hpp"

namespace cscp::relax {

enum class Mode { TrustRegion, SoftConstraint };

// Anchor of one atom: previous-iterate values of left + right and left - right.
struct AtomAnchor {
  Vec plus;
  Vec minus;
};

AtomAnchor anchor_from(const BilinearAtom& atom, const Vec& x);

struct RelaxationState {
  Mode mode = Mode::TrustRegion;
  int iteration = 1;  // 1-based; iteration 1 emits only the convex sides
  double rho0 = 1.0;
  double nu = 0.65;
  double soft_penalty = 1e5;
  // Linear weight on the relaxation slack alpha - q_lin(p) (0 disables).
  double slack_weight = 0.0;
  // Previous primal iterate used to evaluate anchors; empty on iteration 1.
  Vec anchor_point;
  // Linearisation point of the slack term while there is no anchor (optional).
  Vec nominal_point;

  double trust_radius() const;
  bool has_anchor() const { return iteration > 1 && anchor_point.size() > 0; }
};

// Linearisation q(p*) + 2 p*.(p - p*) = 2 p*.p - ||p*||^2 as an affine expression.
LinExpr linearized_square(const std::vector<LinExpr>& p, const Vec& anchor);

// Emits ||p||^2 <= alpha for both substitution variables and, when an anchor is given,
// the cut alpha <= q_lin(p) + rho. Returns the number of cut rows added.
// The slack term w (alpha - q_lin(p)) is linearised at slack_anchor if given, else at anchor, else at 0.
int relax_trust_region(ProgramBuilder& b, const BilinearAtom& atom, const std::optional<AtomAnchor>& anchor,
                       double rho, double slack_weight = 0.0,
                       const std::optional<AtomAnchor>& slack_anchor = std::nullopt);

// Emits ||p||^2 <= alpha for both substitution variables and, when an anchor is given,
// the penalty eta (q_lin(p) - alpha)^2. Returns the epigraph variables of the penalties.
std::vector<int> relax_soft_constraint(ProgramBuilder& b, const BilinearAtom& atom,
                                       const std::optional<AtomAnchor>& anchor, double eta,
                                       double slack_weight = 0.0,
                                       const std::optional<AtomAnchor>& slack_anchor = std::nullopt);

// Dispatches on state.mode.
void relax_atom(ProgramBuilder& b, const BilinearAtom& atom, const RelaxationState& state);

// alpha - ||p||^2 for the plus and minus sides at x.
std::array<double, 2> relaxation_gap(const BilinearAtom& atom, const Vec& x);

}  // namespace cscp::relax
