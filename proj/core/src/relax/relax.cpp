#include "cscp/relax/relax.hpp"

#include <cmath>

namespace cscp::relax {

namespace {

Vec eval_all(const std::vector<LinExpr>& es, const Vec& x) {
  Vec v(static_cast<Eigen::Index>(es.size()));
  for (std::size_t i = 0; i < es.size(); ++i) v[static_cast<Eigen::Index>(i)] = es[i].eval(x);
  return v;
}

}  // namespace

AtomAnchor anchor_from(const BilinearAtom& atom, const Vec& x) {
  return {eval_all(atom.sum(), x), eval_all(atom.diff(), x)};
}

double RelaxationState::trust_radius() const { return rho0 * std::pow(nu, iteration); }

LinExpr linearized_square(const std::vector<LinExpr>& p, const Vec& anchor) {
  LinExpr e(-anchor.squaredNorm());
  for (std::size_t i = 0; i < p.size(); ++i) e += (2.0 * anchor[static_cast<Eigen::Index>(i)]) * p[i];
  return e;
}

namespace {

void convex_sides(ProgramBuilder& b, const BilinearAtom& atom, const std::optional<AtomAnchor>& anchor,
                  double slack_weight) {
  const LinExpr plus = LinExpr::var(atom.plus_var);
  const LinExpr minus = LinExpr::var(atom.minus_var);
  b.add_squared_norm_le(plus, atom.sum());
  b.add_squared_norm_le(minus, atom.diff());
  if (slack_weight > 0.0) {
    const auto n = static_cast<Eigen::Index>(atom.left.size());
    const Vec zero = Vec::Zero(n);
    const Vec& ap = anchor ? anchor->plus : zero;
    const Vec& am = anchor ? anchor->minus : zero;
    b.add_cost(slack_weight * (plus - linearized_square(atom.sum(), ap)));
    b.add_cost(slack_weight * (minus - linearized_square(atom.diff(), am)));
  }
}

}  // namespace

int relax_trust_region(ProgramBuilder& b, const BilinearAtom& atom, const std::optional<AtomAnchor>& anchor,
                       double rho, double slack_weight, const std::optional<AtomAnchor>& slack_anchor) {
  convex_sides(b, atom, slack_anchor ? slack_anchor : anchor, slack_weight);
  if (!anchor) return 0;
  b.add_le(LinExpr::var(atom.plus_var) - linearized_square(atom.sum(), anchor->plus) - rho);
  b.add_le(LinExpr::var(atom.minus_var) - linearized_square(atom.diff(), anchor->minus) - rho);
  return 2;
}

std::vector<int> relax_soft_constraint(ProgramBuilder& b, const BilinearAtom& atom,
                                       const std::optional<AtomAnchor>& anchor, double eta,
                                       double slack_weight, const std::optional<AtomAnchor>& slack_anchor) {
  convex_sides(b, atom, slack_anchor ? slack_anchor : anchor, slack_weight);
  if (!anchor) return {};
  const int tp = b.add_quadratic_cost(
      eta, {linearized_square(atom.sum(), anchor->plus) - LinExpr::var(atom.plus_var)}, "soft");
  const int tm = b.add_quadratic_cost(
      eta, {linearized_square(atom.diff(), anchor->minus) - LinExpr::var(atom.minus_var)}, "soft");
  return {tp, tm};
}

void relax_atom(ProgramBuilder& b, const BilinearAtom& atom, const RelaxationState& state) {
  std::optional<AtomAnchor> anchor;
  std::optional<AtomAnchor> slack_anchor;
  if (state.has_anchor())
    anchor = anchor_from(atom, state.anchor_point);
  else if (state.nominal_point.size() > 0)
    slack_anchor = anchor_from(atom, state.nominal_point);
  if (state.mode == Mode::TrustRegion)
    relax_trust_region(b, atom, anchor, state.trust_radius(), state.slack_weight, slack_anchor);
  else
    relax_soft_constraint(b, atom, anchor, state.soft_penalty, state.slack_weight, slack_anchor);
}

std::array<double, 2> relaxation_gap(const BilinearAtom& atom, const Vec& x) {
  return {x[atom.plus_var] - atom.exact_plus(x), x[atom.minus_var] - atom.exact_minus(x)};
}

}  // namespace cscp::relax
