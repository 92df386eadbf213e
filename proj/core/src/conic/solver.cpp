#include "cscp/conic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kkt.hpp"

namespace cscp::conic {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::PrimalInfeasible: return "primal_infeasible";
    case Status::DualInfeasible: return "dual_infeasible";
    case Status::IterationLimit: return "iteration_limit";
    case Status::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

double inf_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

Vec push_interior(const Vec& v, const ConeSpec& cone, const Vec& e) {
  if (v.size() == 0) return v;
  // Points closer to the boundary than this are shifted too; they would make the first scaling singular.
  const double a = -min_eigenvalue(v, cone);
  return a < -1e-8 * std::max(1.0, v.norm()) ? v : Vec(v + (1.0 + a) * e);
}

Vec shift_by(const Vec& v, const ConeSpec& cone, const Vec& e, double margin) {
  if (v.size() == 0) return v;
  const double a = -min_eigenvalue(v, cone);
  return v + (std::max(a, 0.0) + margin) * e;
}

struct Direction {
  Vec dx, dy, dz, ds;
  double dtau = 0.0, dkap = 0.0;
};

}  // namespace

KktResiduals kkt_residuals(const ConicProgram& prog, const Vec& x, const Vec& y, const Vec& z,
                           const Vec& s) {
  const auto& c = prog.objective;
  const auto& b = prog.eq_rhs;
  const auto& h = prog.ineq_rhs;
  KktResiduals r;
  const double pe = inf_norm(prog.eq_matrix * x - b) / (1.0 + inf_norm(b));
  const double pi = inf_norm(prog.ineq_matrix * x + s - h) / (1.0 + inf_norm(h));
  r.primal = std::max(pe, pi);
  const Vec dres = prog.eq_matrix.transpose() * y + prog.ineq_matrix.transpose() * z + c;
  r.dual = inf_norm(dres) / (1.0 + inf_norm(c));
  const double cx = c.dot(x);
  r.gap = std::abs(cx + b.dot(y) + h.dot(z)) / (1.0 + std::abs(cx));
  return r;
}

namespace {

// Ruiz equilibration: x = D x~, rows of A scaled by ea, rows of G by eg (one factor per
// second-order cone block), objective scaled by cost_scale.
struct Equilibration {
  Vec d, ea, eg;
  double cost_scale = 1.0;
  ConicProgram scaled;
};

Equilibration equilibrate(const ConicProgram& prog, int passes) {
  const int n = prog.num_vars();
  const auto p = prog.eq_matrix.rows();
  const auto m = prog.ineq_matrix.rows();
  Equilibration eq;
  eq.d = Vec::Ones(n);
  eq.ea = Vec::Ones(p);
  eq.eg = Vec::Ones(m);
  SpMat A = prog.eq_matrix;
  SpMat G = prog.ineq_matrix;
  for (int pass = 0; pass < passes; ++pass) {
    Vec col = Vec::Zero(n), ra = Vec::Zero(p), rg = Vec::Zero(m);
    for (int j = 0; j < n; ++j) {
      for (SpMat::InnerIterator it(A, j); it; ++it) {
        const double v = std::abs(it.value());
        col[j] = std::max(col[j], v);
        ra[it.row()] = std::max(ra[it.row()], v);
      }
      for (SpMat::InnerIterator it(G, j); it; ++it) {
        const double v = std::abs(it.value());
        col[j] = std::max(col[j], v);
        rg[it.row()] = std::max(rg[it.row()], v);
      }
    }
    int row = prog.cone.nonneg;
    for (int q : prog.cone.soc_dims) {
      const double mx = rg.segment(row, q).maxCoeff();
      rg.segment(row, q).setConstant(mx);
      row += q;
    }
    auto factor = [](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 1.0; };
    Vec dc(n), fa(p), fg(m);
    for (int j = 0; j < n; ++j) dc[j] = factor(col[j]);
    for (Eigen::Index i = 0; i < p; ++i) fa[i] = factor(ra[i]);
    for (Eigen::Index i = 0; i < m; ++i) fg[i] = factor(rg[i]);
    A = fa.asDiagonal() * A * dc.asDiagonal();
    G = fg.asDiagonal() * G * dc.asDiagonal();
    eq.d = eq.d.cwiseProduct(dc);
    eq.ea = eq.ea.cwiseProduct(fa);
    eq.eg = eq.eg.cwiseProduct(fg);
  }
  ConicProgram& sp = eq.scaled;
  sp.eq_matrix = A;
  sp.ineq_matrix = G;
  sp.eq_rhs = eq.ea.cwiseProduct(prog.eq_rhs);
  sp.ineq_rhs = eq.eg.cwiseProduct(prog.ineq_rhs);
  sp.cone = prog.cone;
  const Vec dcost = eq.d.cwiseProduct(prog.objective);
  eq.cost_scale = 1.0;
  sp.objective = eq.cost_scale * dcost;
  return eq;
}

}  // namespace

ConicSolution solve(const ConicProgram& prog, const SolverSettings& settings,
                    const std::optional<ConicSolution>& warm) {
  if (!prog.well_formed()) throw std::invalid_argument("conic program is not well formed");
  if (!(settings.tol > 0.0) || settings.max_iters < 0 || settings.equilibration_passes < 0)
    throw std::invalid_argument("invalid solver settings");

  const Equilibration eq = equilibrate(prog, settings.equilibration_passes);
  const ConicProgram& sp = eq.scaled;
  const auto& A = sp.eq_matrix;
  const auto& G = sp.ineq_matrix;
  const auto& c = sp.objective;
  const auto& b = sp.eq_rhs;
  const auto& h = sp.ineq_rhs;
  const ConeSpec& cone = sp.cone;
  const int n = prog.num_vars();
  const int p = static_cast<int>(A.rows());
  const int m = static_cast<int>(G.rows());
  const double D = cone.degree();
  const double tol = settings.tol;
  const SpMat At = A.transpose();
  const SpMat Gt = G.transpose();
  const Vec e = cone_identity(cone);

  // Maps between the scaled and the caller's variables.
  auto unscale_x = [&](const Vec& v) -> Vec { return eq.d.cwiseProduct(v); };
  auto unscale_y = [&](const Vec& v) -> Vec { return eq.ea.cwiseProduct(v) / eq.cost_scale; };
  auto unscale_z = [&](const Vec& v) -> Vec { return eq.eg.cwiseProduct(v) / eq.cost_scale; };
  auto unscale_s = [&](const Vec& v) -> Vec { return v.cwiseQuotient(eq.eg); };

  detail::KktSystem kkt(A, G, cone, settings.static_reg, settings.refine_steps);
  detail::NtScaling W(cone);

  ConicSolution out;
  Vec x, y, z, s;
  double tau = 1.0, kap = 1.0;

  const bool use_warm = warm && warm->primal.size() == n && warm->dual_eq.size() == p &&
                        warm->dual_ineq.size() == m && warm->slack.size() == m &&
                        warm->primal.allFinite() && warm->dual_ineq.allFinite() &&
                        warm->slack.allFinite() && warm->dual_eq.allFinite();
  if (use_warm && warm->status == Status::Optimal) {
    // A warm point that already passes the stopping test is returned as is.
    const KktResiduals res = kkt_residuals(prog, warm->primal, warm->dual_eq, warm->dual_ineq, warm->slack);
    const double obj = prog.objective.dot(warm->primal);
    const bool interior = m == 0 || (min_eigenvalue(warm->slack, prog.cone) >= 0.0 &&
                                     min_eigenvalue(warm->dual_ineq, prog.cone) >= 0.0);
    if (interior && res.primal <= tol && res.dual <= tol && res.gap <= tol &&
        warm->slack.dot(warm->dual_ineq) <= tol * std::max({1.0, static_cast<double>(prog.cone.dim()), std::abs(obj)})) {
      out = *warm;
      out.kkt = res;
      out.iterations = 0;
      out.objective = obj + prog.objective_offset;
      return out;
    }
  }
  if (use_warm) {
    x = warm->primal.cwiseQuotient(eq.d);
    y = eq.cost_scale * warm->dual_eq.cwiseQuotient(eq.ea);
    const Vec zw = eq.cost_scale * warm->dual_ineq.cwiseQuotient(eq.eg);
    const Vec sw = eq.eg.cwiseProduct(warm->slack);
    const double theta = 1e-4 * std::max(1.0, std::sqrt(std::max(0.0, sw.dot(zw))));
    s = shift_by(sw, cone, e, theta);
    z = shift_by(zw, cone, e, theta);
    kap = m > 0 ? std::max(s.dot(z) / D, 1e-12) : 1.0;
  } else {
    W.set_identity();
    if (!kkt.factor(W)) {
      out.status = Status::NumericalFailure;
      return out;
    }
    Vec tmp_y, tmp_x, zz;
    kkt.solve(Vec::Zero(n), b, h, x, tmp_y, zz);
    s = push_interior(-zz, cone, e);
    kkt.solve(-c, Vec::Zero(p), Vec::Zero(m), tmp_x, y, z);
    z = push_interior(z, cone, e);
  }

  auto step_length = [&](const Direction& d) {
    double a = std::numeric_limits<double>::infinity();
    if (m > 0) {
      a = std::min(a, max_step(s, d.ds, cone, a));
      a = std::min(a, max_step(z, d.dz, cone, a));
    }
    if (d.dtau < 0.0) a = std::min(a, -tau / d.dtau);
    if (d.dkap < 0.0) a = std::min(a, -kap / d.dkap);
    return a;
  };

  int iter = 0;
  Status status = Status::IterationLimit;
  for (;; ++iter) {
    const Vec rx = At * y + Gt * z + c * tau;
    const Vec ry = A * x - b * tau;
    const Vec rz = G * x + s - h * tau;
    const double cx = c.dot(x), by = b.dot(y), hz = h.dot(z);
    const double rt = kap + cx + by + hz;

    const Vec xo = unscale_x(x / tau);
    const Vec so = unscale_s(s / tau);
    const Vec zo = unscale_z(z / tau);
    const KktResiduals res = kkt_residuals(prog, xo, unscale_y(y / tau), zo, so);
    const double compl_abs = m > 0 ? so.dot(zo) : 0.0;
    const double obj = prog.objective.dot(xo);
    if (res.primal <= tol && res.dual <= tol && res.gap <= tol &&
        compl_abs <= tol * std::max({1.0, static_cast<double>(cone.dim()), std::abs(obj)})) {
      status = Status::Optimal;
      out.kkt = res;
      break;
    }
    if (hz + by < 0.0) {
      const Vec yo = eq.ea.cwiseProduct(y);
      const Vec zc = eq.eg.cwiseProduct(z);
      const double denom = -(prog.eq_rhs.dot(yo) + prog.ineq_rhs.dot(zc));
      if (denom > 0.0) {
        const Vec r = prog.eq_matrix.transpose() * yo + prog.ineq_matrix.transpose() * zc;
        const double cert = inf_norm(r) / denom;
        if (cert <= tol) {
          status = Status::PrimalInfeasible;
          out.certificate_residual = cert;
          break;
        }
      }
    }
    if (cx < 0.0) {
      const Vec xr = unscale_x(x);
      const Vec sr = unscale_s(s);
      const double denom = -prog.objective.dot(xr);
      if (denom > 0.0) {
        const double cert = std::max(inf_norm(prog.eq_matrix * xr), inf_norm(prog.ineq_matrix * xr + sr)) / denom;
        if (cert <= tol) {
          status = Status::DualInfeasible;
          out.certificate_residual = cert;
          break;
        }
      }
    }
    if (iter >= settings.max_iters) {
      status = Status::IterationLimit;
      out.kkt = res;
      break;
    }

    if (!W.update(s, z) || !kkt.factor(W)) {
      status = Status::NumericalFailure;
      out.kkt = res;
      break;
    }
    const Vec& lam = W.lambda();
    const double mu = (s.dot(z) + kap * tau) / (D + 1.0);

    Vec x1, y1, z1;
    kkt.solve(-c, b, h, x1, y1, z1);
    const double denom = c.dot(x1) + b.dot(y1) + h.dot(z1) - kap / tau;

    auto direction = [&](double scale, const Vec& ds_rhs, double dkap_rhs) {
      Direction d;
      const Vec ws = W.apply(jordan_divide(lam, ds_rhs, cone));
      Vec x2, y2, z2;
      kkt.solve(-scale * rx, -scale * ry, -scale * rz - ws, x2, y2, z2);
      d.dtau = (-scale * rt - dkap_rhs / tau - c.dot(x2) - b.dot(y2) - h.dot(z2)) / denom;
      d.dx = x2 + d.dtau * x1;
      d.dy = y2 + d.dtau * y1;
      d.dz = z2 + d.dtau * z1;
      d.ds = ws - W.apply_sq(d.dz);
      d.dkap = (dkap_rhs - kap * d.dtau) / tau;
      return d;
    };

    const Vec lam_sq = jordan_product(lam, lam, cone);
    const Direction aff = direction(1.0, -lam_sq, -kap * tau);
    const double a_aff = std::min(1.0, step_length(aff));
    const double sigma = std::clamp(std::pow(1.0 - a_aff, 3), 0.0, 1.0);

    const Vec corr = jordan_product(W.apply_inv(aff.ds), W.apply(aff.dz), cone);
    const Vec ds_rhs = -lam_sq - corr + sigma * mu * e;
    const double dkap_rhs = -kap * tau - aff.dkap * aff.dtau + sigma * mu;
    const Direction d = direction(1.0 - sigma, ds_rhs, dkap_rhs);
    const double alpha = std::min(1.0, settings.step_fraction * step_length(d));
    if (!(alpha > 1e-14) || !d.dx.allFinite() || !d.dz.allFinite()) {
      status = Status::NumericalFailure;
      out.kkt = res;
      break;
    }
    x += alpha * d.dx;
    y += alpha * d.dy;
    z += alpha * d.dz;
    s += alpha * d.ds;
    tau += alpha * d.dtau;
    kap += alpha * d.dkap;
  }

  out.status = status;
  out.iterations = iter;
  if (status == Status::PrimalInfeasible) {
    const Vec yo = eq.ea.cwiseProduct(y);
    const Vec zc = eq.eg.cwiseProduct(z);
    const double scale = -(prog.eq_rhs.dot(yo) + prog.ineq_rhs.dot(zc));
    out.primal = Vec::Zero(n);
    out.slack = Vec::Zero(m);
    out.dual_eq = yo / scale;
    out.dual_ineq = zc / scale;
    out.objective = std::numeric_limits<double>::infinity();
  } else if (status == Status::DualInfeasible) {
    const Vec xr = unscale_x(x);
    const double scale = -prog.objective.dot(xr);
    out.primal = xr / scale;
    out.slack = unscale_s(s) / scale;
    out.dual_eq = Vec::Zero(p);
    out.dual_ineq = Vec::Zero(m);
    out.objective = -std::numeric_limits<double>::infinity();
  } else {
    out.primal = unscale_x(x / tau);
    out.dual_eq = unscale_y(y / tau);
    out.dual_ineq = unscale_z(z / tau);
    out.slack = unscale_s(s / tau);
    out.objective = prog.objective.dot(out.primal) + prog.objective_offset;
  }
  return out;
}

}  // namespace cscp::conic
