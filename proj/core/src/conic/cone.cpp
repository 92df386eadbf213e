#include "cscp/conic/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cscp::conic {

int ConeSpec::dim() const {
  return nonneg + std::accumulate(soc_dims.begin(), soc_dims.end(), 0);
}

bool ConeSpec::valid() const {
  if (nonneg < 0) return false;
  return std::all_of(soc_dims.begin(), soc_dims.end(), [](int d) { return d >= 1; });
}

namespace {

void check_dim(const Vec& v, const ConeSpec& cone) {
  if (v.size() != cone.dim()) throw std::invalid_argument("cone dimension mismatch");
}

// Smallest positive root of a*x^2 + 2*b*x + c with c > 0, or +inf.
double first_positive_root(double a, double b, double c) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a == 0.0) return b < 0.0 ? -c / (2.0 * b) : inf;
  const double disc = b * b - a * c;
  if (disc < 0.0) return inf;
  const double sq = std::sqrt(disc);
  const double q = -(b + std::copysign(sq, b));
  double best = inf;
  if (q != 0.0) {
    const double r1 = q / a;
    const double r2 = c / q;
    if (r1 > 0.0) best = std::min(best, r1);
    if (r2 > 0.0) best = std::min(best, r2);
  } else if (-b / a > 0.0) {
    best = -b / a;
  }
  return best;
}

}  // namespace

Vec project_onto_cone(const Vec& v, const ConeSpec& cone) {
  check_dim(v, cone);
  Vec p = v;
  for (int i = 0; i < cone.nonneg; ++i) p[i] = std::max(0.0, v[i]);
  int off = cone.nonneg;
  for (int d : cone.soc_dims) {
    const double t = v[off];
    const double nu = v.segment(off + 1, d - 1).norm();
    if (nu <= t) {
      // already inside
    } else if (nu <= -t) {
      p.segment(off, d).setZero();
    } else {
      const double a = 0.5 * (t + nu);
      p[off] = a;
      p.segment(off + 1, d - 1) = (a / nu) * v.segment(off + 1, d - 1);
    }
    off += d;
  }
  return p;
}

double min_eigenvalue(const Vec& v, const ConeSpec& cone) {
  check_dim(v, cone);
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cone.nonneg; ++i) m = std::min(m, v[i]);
  int off = cone.nonneg;
  for (int d : cone.soc_dims) {
    m = std::min(m, v[off] - v.segment(off + 1, d - 1).norm());
    off += d;
  }
  return m;
}

Vec cone_identity(const ConeSpec& cone) {
  Vec e = Vec::Zero(cone.dim());
  e.head(cone.nonneg).setOnes();
  int off = cone.nonneg;
  for (int d : cone.soc_dims) {
    e[off] = 1.0;
    off += d;
  }
  return e;
}

Vec jordan_product(const Vec& u, const Vec& v, const ConeSpec& cone) {
  Vec w(u.size());
  w.head(cone.nonneg) = u.head(cone.nonneg).cwiseProduct(v.head(cone.nonneg));
  int off = cone.nonneg;
  for (int d : cone.soc_dims) {
    w[off] = u.segment(off, d).dot(v.segment(off, d));
    w.segment(off + 1, d - 1) =
        u[off] * v.segment(off + 1, d - 1) + v[off] * u.segment(off + 1, d - 1);
    off += d;
  }
  return w;
}

Vec jordan_divide(const Vec& lambda, const Vec& d_in, const ConeSpec& cone) {
  Vec x(lambda.size());
  x.head(cone.nonneg) = d_in.head(cone.nonneg).cwiseQuotient(lambda.head(cone.nonneg));
  int off = cone.nonneg;
  for (int d : cone.soc_dims) {
    const double l0 = lambda[off];
    const auto l1 = lambda.segment(off + 1, d - 1);
    const double ln = l1.norm();
    const double det = (l0 - ln) * (l0 + ln);
    const double x0 = (l0 * d_in[off] - l1.dot(d_in.segment(off + 1, d - 1))) / det;
    x[off] = x0;
    x.segment(off + 1, d - 1) = (d_in.segment(off + 1, d - 1) - x0 * l1) / l0;
    off += d;
  }
  return x;
}

double max_step(const Vec& v, const Vec& dv, const ConeSpec& cone, double cap) {
  double a = cap;
  for (int i = 0; i < cone.nonneg; ++i)
    if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
  int off = cone.nonneg;
  for (int d : cone.soc_dims) {
    const double t = v[off], dt = dv[off];
    const auto u = v.segment(off + 1, d - 1);
    const auto du = dv.segment(off + 1, d - 1);
    if (dt < 0.0) a = std::min(a, -t / dt);
    const double qa = dt * dt - du.squaredNorm();
    const double qb = t * dt - u.dot(du);
    const double un = u.norm();
    const double qc = (t - un) * (t + un);
    if (qc <= 0.0) return 0.0;
    a = std::min(a, first_positive_root(qa, qb, qc));
    off += d;
  }
  return std::max(a, 0.0);
}

}  // namespace cscp::conic
