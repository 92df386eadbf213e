#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "cscp/conic/program.hpp"

namespace cscp::conic::detail {

// Nesterov-Todd scaling W (symmetric) with W z = W^{-1} s = lambda.
class NtScaling {
 public:
  explicit NtScaling(const ConeSpec& cone);
  void set_identity();
  bool update(const Vec& s, const Vec& z);

  Vec apply(const Vec& v) const;      // W v
  Vec apply_inv(const Vec& v) const;  // W^{-1} v
  Vec apply_sq(const Vec& v) const;   // W^2 v
  const Vec& lambda() const { return lambda_; }
  const ConeSpec& cone() const { return cone_; }

  double nonneg_sq(int i) const { return nn_[i] * nn_[i]; }
  const Eigen::MatrixXd& soc_sq(int k) const { return w2_[k]; }

 private:
  ConeSpec cone_;
  Vec nn_;
  std::vector<Eigen::MatrixXd> w_, winv_, w2_;
  Vec lambda_;
};

// Quasi-definite reduced KKT system
//   [ reg   A'    G'      ] [x]   [rx]
//   [ A    -reg   0       ] [y] = [ry]
//   [ G     0   -W^2 - reg] [z]   [rz]
// factored by sparse LDL' with a fill-reducing ordering computed once.
class KktSystem {
 public:
  KktSystem(const SpMat& A, const SpMat& G, const ConeSpec& cone, double reg, int refine);
  bool factor(const NtScaling& w);
  void solve(const Vec& rx, const Vec& ry, const Vec& rz, Vec& x, Vec& y, Vec& z) const;

 private:
  Vec multiply(const Vec& v) const;  // unregularised K v

  const SpMat& A_;
  const SpMat& G_;
  SpMat At_, Gt_;
  ConeSpec cone_;
  double reg_;
  int refine_;
  int n_, p_, m_;
  SpMat K_;
  std::vector<int> zslot_;  // value index of every z-block lower entry, in assembly order
  std::vector<int> dslot_;  // value index of the x- and y-block diagonal
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt_;
  const NtScaling* w_ = nullptr;
};

}  // namespace cscp::conic::detail
