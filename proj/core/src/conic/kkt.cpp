#include "kkt.hpp"

#include <algorithm>
#include <cmath>

namespace cscp::conic::detail {

NtScaling::NtScaling(const ConeSpec& cone) : cone_(cone), nn_(cone.nonneg), lambda_(cone.dim()) {
  for (int d : cone.soc_dims) {
    w_.emplace_back(d, d);
    winv_.emplace_back(d, d);
    w2_.emplace_back(d, d);
  }
  set_identity();
}

void NtScaling::set_identity() {
  nn_.setOnes();
  for (std::size_t k = 0; k < w_.size(); ++k) {
    w_[k].setIdentity();
    winv_[k].setIdentity();
    w2_[k].setIdentity();
  }
  lambda_.setZero();
}

bool NtScaling::update(const Vec& s, const Vec& z) {
  for (int i = 0; i < cone_.nonneg; ++i) {
    if (!(s[i] > 0.0) || !(z[i] > 0.0)) return false;
    nn_[i] = std::sqrt(s[i] / z[i]);
    lambda_[i] = std::sqrt(s[i] * z[i]);
  }
  int off = cone_.nonneg;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    const int d = cone_.soc_dims[k];
    const auto sv = s.segment(off, d);
    const auto zv = z.segment(off, d);
    const double sn = sv.tail(d - 1).norm(), zn = zv.tail(d - 1).norm();
    const double sjs = (sv[0] - sn) * (sv[0] + sn);
    const double zjz = (zv[0] - zn) * (zv[0] + zn);
    if (!(sjs > 0.0) || !(zjz > 0.0) || !(sv[0] > 0.0) || !(zv[0] > 0.0)) return false;
    const Vec sb = sv / std::sqrt(sjs);
    const Vec zb = zv / std::sqrt(zjz);
    const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
    const double w0 = (sb[0] + zb[0]) / (2.0 * gamma);
    const Vec w1 = (sb.tail(d - 1) - zb.tail(d - 1)) / (2.0 * gamma);
    const double eta = std::pow(sjs / zjz, 0.25);

    Eigen::MatrixXd core(d, d);
    core(0, 0) = w0;
    if (d > 1) {
      core.block(0, 1, 1, d - 1) = w1.transpose();
      core.block(1, 0, d - 1, 1) = w1;
      core.block(1, 1, d - 1, d - 1) =
          Eigen::MatrixXd::Identity(d - 1, d - 1) + w1 * w1.transpose() / (1.0 + w0);
    }
    w_[k] = eta * core;
    if (d > 1) {
      core.block(0, 1, 1, d - 1) *= -1.0;
      core.block(1, 0, d - 1, 1) *= -1.0;
    }
    winv_[k] = core / eta;
    w2_[k] = w_[k] * w_[k];
    lambda_.segment(off, d) = w_[k] * zv;
    off += d;
  }
  return true;
}

Vec NtScaling::apply(const Vec& v) const {
  Vec r(v.size());
  r.head(cone_.nonneg) = nn_.cwiseProduct(v.head(cone_.nonneg));
  int off = cone_.nonneg;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    const int d = cone_.soc_dims[k];
    r.segment(off, d) = w_[k] * v.segment(off, d);
    off += d;
  }
  return r;
}

Vec NtScaling::apply_inv(const Vec& v) const {
  Vec r(v.size());
  r.head(cone_.nonneg) = v.head(cone_.nonneg).cwiseQuotient(nn_);
  int off = cone_.nonneg;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    const int d = cone_.soc_dims[k];
    r.segment(off, d) = winv_[k] * v.segment(off, d);
    off += d;
  }
  return r;
}

Vec NtScaling::apply_sq(const Vec& v) const {
  Vec r(v.size());
  r.head(cone_.nonneg) = nn_.cwiseAbs2().cwiseProduct(v.head(cone_.nonneg));
  int off = cone_.nonneg;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    const int d = cone_.soc_dims[k];
    r.segment(off, d) = w2_[k] * v.segment(off, d);
    off += d;
  }
  return r;
}

KktSystem::KktSystem(const SpMat& A, const SpMat& G, const ConeSpec& cone, double reg, int refine)
    : A_(A), G_(G), At_(A.transpose()), Gt_(G.transpose()), cone_(cone), reg_(reg),
      refine_(refine), n_(static_cast<int>(A.cols())), p_(static_cast<int>(A.rows())),
      m_(static_cast<int>(G.rows())) {
  const int N = n_ + p_ + m_;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(N + A.nonZeros() + G.nonZeros() + 4 * m_);
  for (int j = 0; j < n_; ++j) trip.emplace_back(j, j, reg_);
  for (int j = 0; j < n_; ++j) {
    for (SpMat::InnerIterator it(A, j); it; ++it) trip.emplace_back(n_ + it.row(), j, it.value());
    for (SpMat::InnerIterator it(G, j); it; ++it)
      trip.emplace_back(n_ + p_ + it.row(), j, it.value());
  }
  for (int i = 0; i < p_; ++i) trip.emplace_back(n_ + i, n_ + i, -reg_);

  std::vector<std::pair<int, int>> zentries;
  const int z0 = n_ + p_;
  for (int i = 0; i < cone.nonneg; ++i) zentries.emplace_back(z0 + i, z0 + i);
  int off = cone.nonneg;
  for (int d : cone.soc_dims) {
    for (int c = 0; c < d; ++c)
      for (int r = c; r < d; ++r) zentries.emplace_back(z0 + off + r, z0 + off + c);
    off += d;
  }
  for (const auto& [r, c] : zentries) trip.emplace_back(r, c, r == c ? -1.0 : 0.0);

  K_.resize(N, N);
  K_.setFromTriplets(trip.begin(), trip.end());
  K_.makeCompressed();

  auto slot_of = [&](int r, int c) {
    const int begin = K_.outerIndexPtr()[c];
    const int end = K_.outerIndexPtr()[c + 1];
    const int* rows = K_.innerIndexPtr();
    return static_cast<int>(std::lower_bound(rows + begin, rows + end, r) - rows);
  };
  zslot_.reserve(zentries.size());
  for (const auto& [r, c] : zentries) zslot_.push_back(slot_of(r, c));
  for (int j = 0; j < n_ + p_; ++j) dslot_.push_back(slot_of(j, j));
  ldlt_.analyzePattern(K_);
}

bool KktSystem::factor(const NtScaling& w) {
  w_ = &w;
  double* val = K_.valuePtr();
  // A zero or non-finite pivot is retried with stronger regularisation; refinement against the
  // unregularised matrix absorbs the perturbation.
  double reg = reg_;
  for (int attempt = 0; attempt < 4; ++attempt, reg *= 100.0) {
    for (int j = 0; j < n_ + p_; ++j) val[dslot_[j]] = j < n_ ? reg : -reg;
    std::size_t slot = 0;
    for (int i = 0; i < cone_.nonneg; ++i) val[zslot_[slot++]] = -w.nonneg_sq(i) - reg;
    for (std::size_t k = 0; k < cone_.soc_dims.size(); ++k) {
      const int d = cone_.soc_dims[k];
      const auto& w2 = w.soc_sq(static_cast<int>(k));
      for (int c = 0; c < d; ++c)
        for (int r = c; r < d; ++r) val[zslot_[slot++]] = -w2(r, c) - (r == c ? reg : 0.0);
    }
    ldlt_.factorize(K_);
    if (ldlt_.info() == Eigen::Success && ldlt_.vectorD().allFinite()) return true;
  }
  return false;
}

Vec KktSystem::multiply(const Vec& v) const {
  Vec r(v.size());
  const auto x = v.head(n_);
  const auto y = v.segment(n_, p_);
  const auto z = v.tail(m_);
  r.head(n_) = At_ * y + Gt_ * z;
  r.segment(n_, p_) = A_ * x;
  r.tail(m_) = G_ * x - w_->apply_sq(z);
  return r;
}

void KktSystem::solve(const Vec& rx, const Vec& ry, const Vec& rz, Vec& x, Vec& y, Vec& z) const {
  Vec rhs(n_ + p_ + m_);
  rhs << rx, ry, rz;
  Vec sol = ldlt_.solve(rhs);
  for (int k = 0; k < refine_; ++k) {
    const Vec res = rhs - multiply(sol);
    sol += ldlt_.solve(res);
  }
  x = sol.head(n_);
  y = sol.segment(n_, p_);
  z = sol.tail(m_);
}

}  // namespace cscp::conic::detail
