#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cscp/mip/bnb.hpp"
#include "cscp/model/feasibility.hpp"
#include "enumerate.hpp"
#include "fixtures.hpp"

namespace cscp::mip {
namespace {

using Eigen::Vector3d;
using testing::monopod;
using testing::square;
using testing::three_squares;

E3 vars3(int first) { return {LinExpr::var(first), LinExpr::var(first + 1), LinExpr::var(first + 2)}; }
E3 const3(const Vector3d& v) { return {LinExpr(v.x()), LinExpr(v.y()), LinExpr(v.z())}; }

// Largest violation of the linear rows (eq as |.|, nonneg block as positive part) at x.
// Only valid for programs without second-order cones.
double row_violation(const conic::ConicProgram& P, const conic::Vec& x) {
  double v = 0.0;
  if (P.eq_rhs.size() > 0) v = (P.eq_matrix * x - P.eq_rhs).cwiseAbs().maxCoeff();
  if (P.ineq_rhs.size() > 0) v = std::max(v, (P.ineq_matrix * x - P.ineq_rhs).maxCoeff());
  return std::max(v, 0.0);
}

TEST(Halfspaces, LateralAndPlaneViolations) {
  const auto hs = surface_halfspaces(square(0, 0, 0, 0.5));
  EXPECT_EQ(hs.lateral_rows, 4);
  EXPECT_EQ(hs.rows(), 6);
  const auto lat = hs.violation(Vector3d(0.6, 0, 0));
  EXPECT_NEAR(lat.head(hs.lateral_rows).maxCoeff(), 0.1, 1e-12);
  EXPECT_NEAR(lat.tail(2).maxCoeff(), 0.0, 1e-12);
  const auto up = hs.violation(Vector3d(0, 0, 0.1));
  EXPECT_NEAR(up.head(hs.lateral_rows).maxCoeff(), 0.0, 1e-12);
  EXPECT_NEAR(up.tail(2).maxCoeff(), 0.1, 1e-12);
  EXPECT_EQ(hs.violation(Vector3d(0.3, -0.2, 0)).maxCoeff(), 0.0);
}

TEST(BigM, ConstantsAreTightOverTheBox) {
  const auto surfaces = three_squares();
  const Box box = terrain_bounding_box(surfaces, 0.25);
  ASSERT_TRUE(box.finite());
  const auto hs = surface_halfspaces(surfaces[1]);
  const Eigen::VectorXd M = big_m_constants(hs, box);
  Eigen::VectorXd seen = Eigen::VectorXd::Constant(hs.rows(), -1e300);
  const int n = 12;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) {
        const Vector3d u(double(i) / n, double(j) / n, double(k) / n);
        const Vector3d p = box.lo + u.cwiseProduct(box.hi - box.lo);
        const Eigen::VectorXd lhs = hs.A * p - hs.b;
        EXPECT_TRUE((lhs.array() <= M.array() + 1e-12).all());
        seen = seen.cwiseMax(lhs);
      }
  // The grid contains the box corners, where each linear row peaks.
  EXPECT_LT((seen.cwiseMax(0.0) - M).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BigM, PinnedSelectorReducesToMembershipOrNothing) {
  const auto surfaces = three_squares();
  const Box box = terrain_bounding_box(surfaces, 0.25);
  const auto hs = surface_halfspaces(surfaces[1]);

  ProgramBuilder on;
  const int p = on.add_vars(3);
  EXPECT_EQ(big_m_link(on, LinExpr(1.0), hs, box, vars3(p)), hs.lateral_rows + 1);
  EXPECT_EQ(on.num_eq(), 1);
  const auto P = on.build();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    Vector3d x = box.lo + Vector3d(U(rng), U(rng), U(rng)).cwiseProduct(box.hi - box.lo);
    if (trial % 2 == 0) x.z() = 0.05;  // on the plane, so only the lateral rows decide
    const bool inside = hs.violation(x).maxCoeff() <= 1e-12;
    EXPECT_EQ(row_violation(P, x) <= 1e-12, inside) << x.transpose();
  }

  ProgramBuilder off;
  const int q = off.add_vars(3);
  EXPECT_EQ(big_m_link(off, LinExpr(0.0), hs, box, vars3(q)), 0);
  EXPECT_EQ(off.num_le() + off.num_eq(), 0);

  Box open;
  open.hi = Vector3d::Constant(std::numeric_limits<double>::infinity());
  ProgramBuilder bad;
  const int r = bad.add_vars(4);
  EXPECT_THROW(big_m_link(bad, LinExpr::var(r + 3), hs, open, vars3(r)), std::invalid_argument);
}

TEST(BigM, RelaxedSelectorAtZeroAdmitsTheWholeBox) {
  const auto surfaces = three_squares();
  const Box box = terrain_bounding_box(surfaces, 0.25);
  const auto hs = surface_halfspaces(surfaces[2]);
  ProgramBuilder b;
  const int p = b.add_vars(3);
  const int h = b.add_var();
  big_m_link(b, LinExpr::var(h), hs, box, vars3(p));
  const auto P = b.build();
  const int n = 8;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) {
        conic::Vec x(4);
        x.head<3>() = box.lo + Vector3d(double(i) / n, double(j) / n, double(k) / n).cwiseProduct(box.hi - box.lo);
        x[3] = 0.0;
        EXPECT_LE(row_violation(P, x), 1e-12);
      }
}

TEST(Reach, LinearExamples) {
  const Vector3d lo(-0.5, -0.5, -0.3), hi(0.5, 0.5, 0.3);
  EXPECT_NEAR(reachability_linear_violation(Vector3d(0.6, 0, 0), Vector3d::Zero(), lo, hi), 0.1, 1e-12);
  EXPECT_EQ(reachability_linear_violation(Vector3d(0.4, -0.4, 0.2), Vector3d::Zero(), lo, hi), 0.0);
  EXPECT_NEAR(reachability_linear_violation(Vector3d(1, 1, -0.5), Vector3d(1, 1, 0), lo, hi), 0.2, 1e-12);
}

TEST(Reach, LinearRowsAgreeWithDirectCheck) {
  const Vector3d lo(-0.4, -0.3, -0.2), hi(0.5, 0.3, 0.25);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-0.8, 0.8);
  int feasible = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Vector3d prev(U(rng), U(rng), U(rng) * 0.2);
    const Vector3d cur = prev + Vector3d(U(rng), U(rng), U(rng) * 0.5);
    ProgramBuilder b;
    const int p = b.add_vars(3);
    EXPECT_EQ(reachability_linear(b, vars3(p), const3(prev), lo, hi), 6);
    const bool direct = reachability_linear_violation(cur, prev, lo, hi) == 0.0;
    EXPECT_EQ(row_violation(b.build(), cur) <= 1e-14, direct);
    feasible += direct ? 1 : 0;
  }
  EXPECT_GT(feasible, 50);
  EXPECT_LT(feasible, 950);
}

TEST(Yaw, ExactAtBreakpoints) {
  const auto m = YawModel::uniform(-std::numbers::pi / 2, std::numbers::pi / 2, 5);
  ASSERT_EQ(m.segments(), 5);
  for (double th : m.breakpoints()) {
    EXPECT_NEAR(m.pwa_sin(th), std::sin(th), 1e-14);
    EXPECT_NEAR(m.pwa_cos(th), std::cos(th), 1e-14);
  }
  EXPECT_EQ(m.segment(m.breakpoints()[2]), 1);
  EXPECT_EQ(m.segment(-10.0), 0);
  EXPECT_EQ(m.segment(10.0), 4);
}

TEST(Yaw, SupErrorMatchesDenseSampling) {
  const double lo = -std::numbers::pi / 2, hi = std::numbers::pi / 2;
  const int l = 5;
  const auto m = YawModel::uniform(lo, hi, l);
  const double h = (hi - lo) / l;
  // Oracle: chords rebuilt from the breakpoints, sampled densely.
  double oracle_sin = 0.0, oracle_cos = 0.0, model_sin = 0.0, model_cos = 0.0;
  for (int k = 0; k < l; ++k) {
    const double a = lo + k * h, b = a + h;
    for (int i = 0; i <= 20000; ++i) {
      const double t = a + h * i / 20000.0;
      const double w = (t - a) / h;
      oracle_sin = std::max(oracle_sin, std::abs(std::sin(t) - ((1 - w) * std::sin(a) + w * std::sin(b))));
      oracle_cos = std::max(oracle_cos, std::abs(std::cos(t) - ((1 - w) * std::cos(a) + w * std::cos(b))));
      model_sin = std::max(model_sin, std::abs(std::sin(t) - m.pwa_sin(t)));
      model_cos = std::max(model_cos, std::abs(std::cos(t) - m.pwa_cos(t)));
    }
  }
  EXPECT_NEAR(model_sin, oracle_sin, 1e-12);
  EXPECT_NEAR(model_cos, oracle_cos, 1e-12);
  // The cosine chord over [-pi/10, pi/10] is flat at cos(pi/10); the error peaks at 0.
  EXPECT_NEAR(model_cos, 1.0 - std::cos(std::numbers::pi / 10), 1e-12);
  EXPECT_NEAR(model_sin, 0.046561461905312296, 1e-8);
  EXPECT_LE(std::max(model_sin, model_cos), h * h / 8.0);
}

TEST(Yaw, RejectsNonIncreasingBreakpoints) {
  EXPECT_THROW(YawModel({0.0, 1.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(YawModel({0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(YawModel({0.0}), std::invalid_argument);
}

TEST(Yaw, SelectedSegmentPinsTheChord) {
  const auto m = YawModel::uniform(-1.0, 1.0, 4);
  for (double th : {-0.9, -0.3, 0.2, 0.75}) {
    const int k = m.segment(th);
    ProgramBuilder b;
    const int v = b.add_vars(3);  // theta, sin, cos
    YawExprs y{LinExpr::var(v), LinExpr::var(v + 1), LinExpr::var(v + 2), {}, {}};
    for (int j = 0; j < 4; ++j) y.S.push_back(LinExpr(j == k ? 1.0 : 0.0));
    for (int j = 0; j < 4; ++j) y.C.push_back(LinExpr(j == k ? 1.0 : 0.0));
    pwa_rotation_rows(b, y, m);
    const auto P = b.build();
    conic::Vec x(3);
    x << th, m.pwa_sin(th), m.pwa_cos(th);
    EXPECT_LE(row_violation(P, x), 1e-12);
    x[1] += 1e-3;
    EXPECT_GT(row_violation(P, x), 1e-4);
  }
}

TEST(Reach, TwoDiscGeometry) {
  ReachSettings r;
  r.focus1 = Eigen::Vector2d(0.0, 0.1);
  r.focus2 = Eigen::Vector2d(0.0, -0.1);
  r.radius1 = r.radius2 = 0.3;
  const Vector3d o = Vector3d::Zero();
  EXPECT_TRUE(reachability_soc_satisfied(Vector3d(0.2, 0, 0), o, 0.0, 1.0, r));
  EXPECT_FALSE(reachability_soc_satisfied(Vector3d(0, 0.25, 0), o, 0.0, 1.0, r));
  // A quarter turn moves the foci onto the x axis.
  EXPECT_TRUE(reachability_soc_satisfied(Vector3d(0, 0.25, 0), o, 1.0, 0.0, r));
  EXPECT_FALSE(reachability_soc_satisfied(Vector3d(0.25, 0, 0), o, 1.0, 0.0, r));
  EXPECT_TRUE(reachability_soc_satisfied(Vector3d(1.2, 1, 0), Vector3d(1, 1, 0), 0.0, 1.0, r));
}

TEST(Reach, ConeRowsAgreeWithDirectCheck) {
  ReachSettings r;
  r.focus1 = Eigen::Vector2d(0.05, 0.1);
  r.focus2 = Eigen::Vector2d(0.05, -0.1);
  r.radius1 = 0.35;
  r.radius2 = 0.3;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  std::uniform_real_distribution<double> Y(-1.5, 1.5);
  for (int trial = 0; trial < 300; ++trial) {
    const Vector3d prev(U(rng), U(rng), 0.0);
    const Vector3d cur(U(rng), U(rng), 0.0);
    const double yaw = Y(rng);
    ProgramBuilder b;
    const int p = b.add_vars(3);
    EXPECT_EQ(reachability_soc(b, vars3(p), const3(prev), LinExpr(std::sin(yaw)), LinExpr(std::cos(yaw)), r), 2);
    const auto P = b.build();
    const conic::Vec s = P.ineq_rhs - P.ineq_matrix * cur;
    const bool rows = conic::min_eigenvalue(s, P.cone) >= -1e-12;
    EXPECT_EQ(rows, reachability_soc_satisfied(cur, prev, std::sin(yaw), std::cos(yaw), r, 1e-12));
  }
}

TEST(Planner, SingleSurfaceNeedsOneNode) {
  auto spec = monopod({square(0, 0, 0, 0.6)}, 1);
  MipSettings set;
  const auto res = plan_contacts(spec, set);
  ASSERT_EQ(res.status, MipStatus::Optimal);
  EXPECT_EQ(res.nodes, 1);
  EXPECT_EQ(res.assignment.surface[1], 0);
}

TEST(Planner, MatchesEnumerationTwoByTwo) {
  auto surfaces = three_squares();
  surfaces.pop_back();
  const auto spec = monopod(surfaces, 2);
  const ContactProblem P(spec, MipSettings{});
  const auto oracle = testing::enumerate_assignments(P);
  const auto res = plan_contacts(P);
  ASSERT_EQ(res.status, MipStatus::Optimal);
  EXPECT_LE(relative_gap(res.lower_bound, res.objective), 1e-4);
  EXPECT_NEAR(res.objective, oracle.best, 1e-4 * std::max(1.0, oracle.best));
}

TEST(Planner, MatchesEnumerationThreeByThree) {
  const auto spec = monopod(three_squares(), 2);
  const ContactProblem P(spec, MipSettings{});
  const auto oracle = testing::enumerate_assignments(P);
  const auto res = plan_contacts(P);
  ASSERT_EQ(res.status, MipStatus::Optimal);
  EXPECT_NEAR(res.objective, oracle.best, 1e-4 * std::max(1.0, oracle.best));
  EXPECT_NEAR(res.objective, 64.9259, 1e-3);
  for (std::size_t i = 0; i < oracle.choice.size(); ++i)
    EXPECT_EQ(res.assignment.surface[P.planned()[i]], oracle.choice[i]);
}

TEST(Planner, BoundsAndNodeLogAreConsistent) {
  const auto spec = monopod(three_squares(), 2);
  const auto res = plan_contacts(spec, MipSettings{});
  ASSERT_TRUE(res.has_incumbent);
  ASSERT_FALSE(res.bounds.empty());
  for (std::size_t i = 0; i < res.bounds.size(); ++i) {
    EXPECT_LE(res.bounds[i].lb, res.bounds[i].ub + 1e-9);
    if (i > 0) {
      EXPECT_GE(res.bounds[i].lb, res.bounds[i - 1].lb - 1e-9);
    }
  }
  for (const auto& n : res.node_log)
    if (n.parent >= 0) {
      EXPECT_GE(n.bound, n.parent_bound - 1e-9) << "node " << n.id;
    }
  EXPECT_LE(res.lower_bound, res.objective + 1e-9);

  // The incumbent is integral and re-solving its fixings reproduces it.
  const ContactProblem P(spec, MipSettings{});
  Fixings f(P.num_binaries(), 0);
  for (Eigen::Index row = 0; row < res.assignment.H.rows(); ++row) {
    EXPECT_EQ(res.assignment.H.row(row).sum(), 1);
    for (Eigen::Index r = 0; r < res.assignment.H.cols(); ++r) {
      EXPECT_TRUE(res.assignment.H(row, r) == 0 || res.assignment.H(row, r) == 1);
      if (res.assignment.H(row, r) == 1) f[P.first_binary(res.assignment.planned[row]) + r] = 1;
    }
  }
  const auto again = solve_node(P, f);
  ASSERT_TRUE(again.feasible);
  EXPECT_EQ(count_fractional(again.binaries), 0);
  EXPECT_NEAR(again.objective, res.objective, 1e-6 * std::max(1.0, res.objective));
}

TEST(Planner, UnreachableSurfaceIsNeverChosen) {
  auto surfaces = three_squares();
  surfaces.push_back(square(3.0, 3.0, 0.0, 0.2));
  const auto spec = monopod(surfaces, 2);
  const auto res = plan_contacts(spec, MipSettings{});
  ASSERT_TRUE(res.has_incumbent);
  for (int s : res.assignment.surface) EXPECT_NE(s, 3);
}

TEST(Planner, PyramidKeepsNormalForcesNonnegative) {
  const auto spec = monopod(three_squares(), 2);
  const auto res = plan_contacts(spec, MipSettings{});
  ASSERT_TRUE(res.has_incumbent);
  const auto placed = apply_assignment(spec, res.assignment);
  for (int t = 1; t <= placed.horizon(); ++t) {
    const auto& s = res.trajectory.samples[t - 1][0];
    if (!s.active) continue;
    const auto& R = placed.rotation(0, t);
    EXPECT_GE(R.col(2).dot(s.wrench.force), -1e-7);
    EXPECT_LE(model::friction_violation(R, s.wrench.force, placed.friction_at(0, t)), 1e-7);
  }
}

TEST(Planner, MoreIterationsPerNodeDoNotRaiseTheIncumbent) {
  const auto spec = monopod(three_squares(), 2);
  MipSettings one, three;
  three.iters_per_node = 3;
  const auto a = plan_contacts(spec, one);
  const auto b = plan_contacts(spec, three);
  ASSERT_TRUE(a.has_incumbent);
  ASSERT_TRUE(b.has_incumbent);
  EXPECT_LE(b.objective, a.objective + 1e-6);
}

TEST(Planner, HandWithoutSurfaceCarriesNoForce) {
  auto spec = monopod(three_squares(), 0);
  model::EndeffectorConfig hand;
  hand.id = "hand";
  hand.is_hand = true;
  hand.max_reach = 1.0;
  spec.endeffectors.push_back(hand);
  auto phases = spec.schedule.phases();
  phases[0].last = 12;
  phases.push_back({1, 3, 8, -1, Vector3d::Zero(), 0.0});
  spec.schedule = model::ContactSchedule(12, 2, phases);
  const ContactProblem P(spec, MipSettings{});
  const auto sol = solve_node(P, Fixings(P.num_binaries(), 0));
  ASSERT_TRUE(sol.feasible);
  for (int t = 3; t <= 8; ++t) EXPECT_LT(sol.trajectory.samples[t - 1][1].wrench.force.norm(), 1e-6);

  // A foot may not drop its surface sum below one.
  auto feet = spec;
  feet.endeffectors[1].is_hand = false;
  const ContactProblem Q(feet, MipSettings{});
  EXPECT_FALSE(solve_node(Q, Fixings(Q.num_binaries(), 0)).feasible);
}

}  // namespace
}  // namespace cscp::mip
