#include "socp_oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "cscp/conic/cone.hpp"

namespace cscp::testing {

using conic::Vec;
using Mat = Eigen::MatrixXd;

OracleResult admm_oracle(const conic::ConicProgram& prog, const OracleSettings& st) {
  const int n = prog.num_vars();
  const int p = static_cast<int>(prog.eq_rhs.size());
  const int m = static_cast<int>(prog.ineq_rhs.size());
  Mat M(p + m, n);
  M.topRows(p) = Mat(prog.eq_matrix);
  M.bottomRows(m) = Mat(prog.ineq_matrix);
  Vec q(p + m);
  q << prog.eq_rhs, prog.ineq_rhs;
  const Vec& c = prog.objective;

  auto project = [&](const Vec& v) {
    Vec out(p + m);
    out.head(p).setZero();
    out.tail(m) = conic::project_onto_cone(v.tail(m), prog.cone);
    return out;
  };

  double rho = 1.0;
  const Mat MtM = M.transpose() * M;
  Eigen::LLT<Mat> llt(rho * MtM + st.sigma * Mat::Identity(n, n));
  Vec x = Vec::Zero(n), z = project(q), y = Vec::Zero(p + m);
  OracleResult r;
  const double qn = std::max(1.0, q.lpNorm<Eigen::Infinity>());
  const double cn = std::max(1.0, c.lpNorm<Eigen::Infinity>());
  for (int k = 1; k <= st.max_iters; ++k) {
    const Vec rhs = st.sigma * x - c - M.transpose() * (rho * (z - q) + y);
    x = llt.solve(rhs);
    const Vec Mx = M * x;
    const Vec relaxed = st.alpha * (q - Mx) + (1.0 - st.alpha) * z;  // over-relaxed -Mx + q
    const Vec z_old = z;
    z = project(relaxed - y / rho);
    y += rho * (z - relaxed);

    if (k % 25 == 0) {
      const double pr = (Mx + z - q).lpNorm<Eigen::Infinity>() / qn;
      const double dr = (c + M.transpose() * y).lpNorm<Eigen::Infinity>() / cn;
      r.primal_residual = pr;
      r.dual_residual = dr;
      const double gap = std::abs(c.dot(x) + q.dot(y)) / std::max(1.0, std::abs(c.dot(x)));
      if (pr <= st.tol && dr <= st.tol && gap <= st.tol) {
        r.converged = true;
        r.iterations = k;
        break;
      }
      if (k % 500 == 0 && (pr > 10.0 * dr || dr > 10.0 * pr)) {
        rho *= std::clamp(std::sqrt(pr / std::max(dr, 1e-300)), 0.1, 10.0);
        llt.compute(rho * MtM + st.sigma * Mat::Identity(n, n));
      }
    }
    r.iterations = k;
  }
  r.x = x;
  r.y = y;
  r.objective = c.dot(x);
  return r;
}

}  // namespace cscp::testing
