#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "cscp/conic/cone.hpp"

namespace cscp::conic {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor>;

// min c'x + offset  s.t.  A x = b,  G x + s = h,  s in K.
struct ConicProgram {
  Vec objective;
  double objective_offset = 0.0;
  SpMat eq_matrix;
  Vec eq_rhs;
  SpMat ineq_matrix;
  Vec ineq_rhs;
  ConeSpec cone;

  int num_vars() const { return static_cast<int>(objective.size()); }
  bool well_formed() const;
};

// Affine expression sum_i coef_i * x_{var_i} + constant.
struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  LinExpr() = default;
  LinExpr(double c) : constant(c) {}  // NOLINT(google-explicit-constructor)
  static LinExpr var(int index, double coef = 1.0);

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(double s);
  double eval(const Vec& x) const;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a);
LinExpr operator*(double s, LinExpr a);
LinExpr operator*(LinExpr a, double s);

// Incrementally assembles a ConicProgram from affine rows.
class ProgramBuilder {
 public:
  int add_var(std::string tag = {});
  int add_vars(int n, const std::string& tag = {});
  int num_vars() const { return static_cast<int>(cost_.size()); }
  const std::string& tag(int var) const { return tags_[var]; }

  void add_eq(const LinExpr& e);                    // e == 0
  void add_le(const LinExpr& e);                    // e <= 0
  void add_soc(const std::vector<LinExpr>& tu);     // tu[0] >= ||tu[1..]||
  // ||v||^2 <= t as a rotated cone; t must be an affine expression that is >= 0 when feasible.
  void add_squared_norm_le(const LinExpr& t, const std::vector<LinExpr>& v);
  void add_cost(const LinExpr& e);
  // Adds weight * ||v||^2 to the objective through an epigraph variable; returns its index.
  int add_quadratic_cost(double weight, const std::vector<LinExpr>& v, const std::string& tag = {});

  int num_eq() const { return static_cast<int>(eq_.size()); }
  int num_le() const { return static_cast<int>(le_.size()); }
  int num_soc() const { return static_cast<int>(soc_.size()); }
  double cost_constant() const { return cost_constant_; }

  ConicProgram build() const;

 private:
  std::vector<double> cost_;
  std::vector<std::string> tags_;
  double cost_constant_ = 0.0;
  std::vector<LinExpr> eq_;
  std::vector<LinExpr> le_;
  std::vector<std::vector<LinExpr>> soc_;
};

}  // namespace cscp::conic
