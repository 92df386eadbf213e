#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cscp/conic/cone.hpp"
#include "cscp/conic/dump.hpp"
#include "cscp/conic/solver.hpp"
#include "random_socp.hpp"
#include "socp_oracle.hpp"

namespace {

using namespace cscp::conic;
using cscp::testing::admm_oracle;

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Vec gaussian(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vec v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

TEST(Cone, ProjectNegativeOrthantEntry) {
  ConeSpec k{1, {}};
  EXPECT_EQ(project_onto_cone(vec({-1.0}), k)[0], 0.0);
}

TEST(Cone, ProjectClosedFormSoc) {
  ConeSpec k{0, {3}};
  const Vec p = project_onto_cone(vec({0.0, 3.0, 4.0}), k);
  EXPECT_NEAR(p[0], 2.5, 1e-15);
  EXPECT_NEAR(p[1], 1.5, 1e-15);
  EXPECT_NEAR(p[2], 2.0, 1e-15);
}

TEST(Cone, ProjectInsideAndPolar) {
  ConeSpec k{0, {3}};
  const Vec inside = vec({5.0, 3.0, 4.0});
  EXPECT_EQ(project_onto_cone(inside, k), inside);
  EXPECT_EQ(project_onto_cone(vec({-5.0, 3.0, 4.0}), k), Vec::Zero(3));
}

TEST(Cone, OneDimensionalSocIsHalfLine) {
  ConeSpec k{0, {1}};
  EXPECT_EQ(project_onto_cone(vec({-2.0}), k)[0], 0.0);
  EXPECT_EQ(project_onto_cone(vec({2.0}), k)[0], 2.0);
}

TEST(Cone, DimensionMismatchThrows) {
  ConeSpec k{2, {3}};
  EXPECT_THROW(project_onto_cone(Vec::Zero(4), k), std::invalid_argument);
}

TEST(Cone, SpecInvariants) {
  ConeSpec k{2, {3, 1}};
  EXPECT_TRUE(k.valid());
  EXPECT_EQ(k.dim(), 6);
  EXPECT_EQ(k.degree(), 4);
  EXPECT_FALSE((ConeSpec{1, {0}}).valid());
  EXPECT_FALSE((ConeSpec{-1, {}}).valid());
}

class ProjectionProperties : public ::testing::TestWithParam<int> {};

TEST_P(ProjectionProperties, IdempotentNonExpansiveVariational) {
  std::mt19937_64 rng(1000 + GetParam());
  const ConeSpec k = cscp::testing::random_cone(rng);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec v = gaussian(rng, k.dim(), 3.0);
    const Vec w = gaussian(rng, k.dim(), 3.0);
    const Vec pv = project_onto_cone(v, k);
    const Vec pw = project_onto_cone(w, k);
    EXPECT_GE(min_eigenvalue(pv, k), -1e-12);
    EXPECT_LE((project_onto_cone(pv, k) - pv).lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_LE((pv - pw).norm(), (v - w).norm() + 1e-12);
    for (int s = 0; s < 10; ++s) {
      const Vec member = cscp::testing::random_interior(rng, k);
      EXPECT_LE((v - pv).dot(member - pv), 1e-10);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(RandomCones, ProjectionProperties, ::testing::Range(0, 20));

TEST(Cone, JordanProductAndDivideAreInverse) {
  std::mt19937_64 rng(7);
  const ConeSpec k{2, {4, 3}};
  const Vec lambda = cscp::testing::random_interior(rng, k);
  const Vec x = gaussian(rng, k.dim());
  const Vec d = jordan_product(lambda, x, k);
  EXPECT_LE((jordan_divide(lambda, d, k) - x).lpNorm<Eigen::Infinity>(), 1e-10);
  EXPECT_LE((jordan_product(cone_identity(k), x, k) - x).lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Cone, MaxStepStopsAtBoundary) {
  const ConeSpec k{1, {3}};
  const Vec v = vec({1.0, 2.0, 0.0, 0.0});
  const Vec dv = vec({-1.0, -1.0, 1.0, 0.0});
  const double a = max_step(v, dv, k, 10.0);
  // Orthant hits zero at a = 1; the cone at 2 - a = a, i.e. a = 1 as well.
  EXPECT_NEAR(a, 1.0, 1e-12);
  EXPECT_NEAR(max_step(v, Vec::Zero(4), k, 0.5), 0.5, 0.0);
}

SpMat sparse(const Eigen::MatrixXd& m) { return m.sparseView(); }

TEST(Solver, MinimiseOverHalfLine) {
  ConicProgram p;
  p.objective = vec({1.0});
  p.eq_matrix.resize(0, 1);
  p.eq_rhs.resize(0);
  p.ineq_matrix = sparse(-Eigen::MatrixXd::Identity(1, 1));
  p.ineq_rhs = vec({0.0});
  p.cone = {1, {}};
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, Status::Optimal);
  EXPECT_NEAR(sol.primal[0], 0.0, 1e-8);
}

TEST(Solver, MaximiseOnUnitDisc) {
  // max x + y  s.t.  (1, x, y) in SOC(3)
  ConicProgram p;
  p.objective = vec({-1.0, -1.0});
  p.eq_matrix.resize(0, 2);
  p.eq_rhs.resize(0);
  Eigen::MatrixXd G(3, 2);
  G << 0, 0, -1, 0, 0, -1;
  p.ineq_matrix = sparse(G);
  p.ineq_rhs = vec({1.0, 0.0, 0.0});
  p.cone = {0, {3}};
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, Status::Optimal);
  EXPECT_NEAR(sol.primal[0], std::sqrt(0.5), 1e-7);
  EXPECT_NEAR(sol.primal[1], std::sqrt(0.5), 1e-7);
  EXPECT_NEAR(sol.objective, -std::sqrt(2.0), 1e-8);
}

TEST(Solver, ObjectiveOffsetIsReported) {
  ConicProgram p;
  p.objective = vec({1.0});
  p.objective_offset = 3.0;
  p.eq_matrix.resize(0, 1);
  p.eq_rhs.resize(0);
  p.ineq_matrix = sparse(-Eigen::MatrixXd::Identity(1, 1));
  p.ineq_rhs = vec({-2.0});
  p.cone = {1, {}};
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, Status::Optimal);
  EXPECT_NEAR(sol.objective, 5.0, 1e-7);
}

TEST(Solver, RejectsMalformedProgram) {
  ConicProgram p;
  p.objective = vec({1.0, 2.0});
  p.eq_matrix.resize(0, 2);
  p.eq_rhs.resize(0);
  p.ineq_matrix.resize(2, 2);
  p.ineq_rhs = Vec::Zero(2);
  p.cone = {1, {}};
  EXPECT_FALSE(p.well_formed());
  EXPECT_THROW(solve(p), std::invalid_argument);
}

double dual_objective(const ConicProgram& p, const ConicSolution& s) {
  return -(p.eq_rhs.dot(s.dual_eq) + p.ineq_rhs.dot(s.dual_ineq));
}

// Properties every Optimal return must have.
void expect_certified_optimal(const ConicProgram& p, const ConicSolution& s, double tol) {
  ASSERT_EQ(s.status, Status::Optimal);
  const auto r = kkt_residuals(p, s.primal, s.dual_eq, s.dual_ineq, s.slack);
  EXPECT_LE(r.primal, tol);
  EXPECT_LE(r.dual, tol);
  EXPECT_LE(r.gap, tol);
  EXPECT_GE(min_eigenvalue(s.slack, p.cone), -tol);
  EXPECT_GE(min_eigenvalue(s.dual_ineq, p.cone), -tol);
  const double cx = p.objective.dot(s.primal);
  EXPECT_LE(std::abs(cx - dual_objective(p, s)) / (1.0 + std::abs(cx)), tol);
  EXPECT_LE(s.slack.dot(s.dual_ineq), tol * std::max({1.0, double(p.cone.dim()), std::abs(cx)}));
}

class RandomFeasible : public ::testing::TestWithParam<int> {};

TEST_P(RandomFeasible, CertifiedAndMatchesOracle) {
  std::mt19937_64 rng(20000 + GetParam());
  const auto inst = cscp::testing::random_feasible_socp(rng);
  const auto sol = solve(inst.prog);
  expect_certified_optimal(inst.prog, sol, 1e-8);
  const auto ref = admm_oracle(inst.prog);
  ASSERT_TRUE(ref.converged) << "oracle residuals " << ref.primal_residual << " " << ref.dual_residual;
  EXPECT_LE(std::abs(sol.objective - ref.objective) / std::max(1.0, std::abs(ref.objective)), 1e-5);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomFeasible, ::testing::Range(0, 50));

class RandomInfeasible : public ::testing::TestWithParam<int> {};

TEST_P(RandomInfeasible, PrimalCertificate) {
  std::mt19937_64 rng(30000 + GetParam());
  const auto p = cscp::testing::random_primal_infeasible(rng);
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, Status::PrimalInfeasible);
  const double by_hz = p.eq_rhs.dot(sol.dual_eq) + p.ineq_rhs.dot(sol.dual_ineq);
  EXPECT_NEAR(by_hz, -1.0, 1e-9);
  const Vec r = p.eq_matrix.transpose() * sol.dual_eq + p.ineq_matrix.transpose() * sol.dual_ineq;
  EXPECT_LE(r.lpNorm<Eigen::Infinity>(), 1e-6);
  EXPECT_GE(min_eigenvalue(sol.dual_ineq, p.cone), -1e-9);
}

TEST_P(RandomInfeasible, DualCertificate) {
  std::mt19937_64 rng(40000 + GetParam());
  const auto p = cscp::testing::random_dual_infeasible(rng);
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, Status::DualInfeasible);
  EXPECT_NEAR(p.objective.dot(sol.primal), -1.0, 1e-9);
  EXPECT_LE((p.eq_matrix * sol.primal).lpNorm<Eigen::Infinity>(), 1e-6);
  EXPECT_LE((p.ineq_matrix * sol.primal + sol.slack).lpNorm<Eigen::Infinity>(), 1e-6);
  EXPECT_GE(min_eigenvalue(sol.slack, p.cone), -1e-9);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomInfeasible, ::testing::Range(0, 10));

TEST(Solver, WarmStartOfIdenticalProgram) {
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(50000 + seed);
    const auto inst = cscp::testing::random_feasible_socp(rng);
    const auto cold = solve(inst.prog);
    ASSERT_EQ(cold.status, Status::Optimal);
    const auto warm = solve(inst.prog, {}, cold);
    ASSERT_EQ(warm.status, Status::Optimal);
    EXPECT_NEAR(warm.objective, cold.objective, 1e-9 * std::max(1.0, std::abs(cold.objective)));
    EXPECT_LE(warm.iterations, cold.iterations + 2);
  }
}

TEST(Solver, IterationLimitIsReported) {
  std::mt19937_64 rng(20002);  // needs about a dozen iterations
  const auto inst = cscp::testing::random_feasible_socp(rng);
  SolverSettings s;
  s.max_iters = 3;
  EXPECT_EQ(solve(inst.prog, s).status, Status::IterationLimit);
}

TEST(Dump, RoundTripIsBitExact) {
  std::mt19937_64 rng(70000);
  for (int i = 0; i < 10; ++i) {
    auto inst = cscp::testing::random_feasible_socp(rng);
    inst.prog.objective_offset = 0.1 * i;
    const std::string text = dump_program(inst.prog);
    const ConicProgram back = load_program(text);
    EXPECT_EQ(dump_program(back), text);
    EXPECT_EQ(back.objective, inst.prog.objective);
    EXPECT_EQ(Eigen::MatrixXd(back.ineq_matrix), Eigen::MatrixXd(inst.prog.ineq_matrix));
    EXPECT_EQ(back.cone.soc_dims, inst.prog.cone.soc_dims);
  }
}

TEST(Builder, SquaredNormEpigraph) {
  // min t  s.t.  t >= (x - 3)^2 + (y + 1)^2 expressed through the rotated cone.
  ProgramBuilder b;
  const int x = b.add_var("x"), y = b.add_var("y");
  const int t = b.add_quadratic_cost(2.0, {LinExpr::var(x) - 3.0, LinExpr::var(y) + 1.0});
  b.add_cost(LinExpr(5.0));
  const auto prog = b.build();
  const auto sol = solve(prog);
  ASSERT_EQ(sol.status, Status::Optimal);
  EXPECT_NEAR(sol.primal[x], 3.0, 1e-5);
  EXPECT_NEAR(sol.primal[y], -1.0, 1e-5);
  EXPECT_NEAR(sol.primal[t], 0.0, 1e-8);
  EXPECT_NEAR(sol.objective, 5.0, 1e-7);
}

TEST(Builder, LinExprArithmetic) {
  const LinExpr e = 2.0 * LinExpr::var(0) - LinExpr::var(1, 3.0) + 4.0;
  EXPECT_DOUBLE_EQ(e.eval(vec({1.0, 2.0})), 2.0 - 6.0 + 4.0);
  EXPECT_DOUBLE_EQ((-e).eval(vec({1.0, 2.0})), 0.0);
}

}  // namespace
