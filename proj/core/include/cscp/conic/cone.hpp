#pragma once

#include <vector>

#include <Eigen/Core>

namespace cscp::conic {

using Vec = Eigen::VectorXd;

// Product cone: nonneg orthant block first, then second-order cones in order.
// A second-order cone of dimension d holds (t, u) with u of length d - 1 and t >= ||u||.
struct ConeSpec {
  int nonneg = 0;
  std::vector<int> soc_dims;

  int dim() const;
  // Number of irreducible blocks; the barrier parameter of the cone.
  int degree() const { return nonneg + static_cast<int>(soc_dims.size()); }
  bool valid() const;
};

Vec project_onto_cone(const Vec& v, const ConeSpec& cone);

// Smallest Jordan eigenvalue over all blocks; >= 0 iff v lies in the cone.
double min_eigenvalue(const Vec& v, const ConeSpec& cone);

// Identity element of the Jordan algebra (ones on the orthant, (1,0,..) per SOC).
Vec cone_identity(const ConeSpec& cone);

// Jordan product u o v and its inverse solve lambda o x = d.
Vec jordan_product(const Vec& u, const Vec& v, const ConeSpec& cone);
Vec jordan_divide(const Vec& lambda, const Vec& d, const ConeSpec& cone);

// Largest a in [0, cap] with v + a * dv still in the cone (v assumed interior).
double max_step(const Vec& v, const Vec& dv, const ConeSpec& cone, double cap);

}  // namespace cscp::conic
