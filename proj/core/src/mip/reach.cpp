#include "cscp/mip/reach.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cscp::mip {

int reachability_linear(ProgramBuilder& b, const E3& p_c, const E3& p_prev, const Eigen::Vector3d& step_min,
                        const Eigen::Vector3d& step_max) {
  if ((step_min.array() > step_max.array()).any()) throw std::invalid_argument("step_min exceeds step_max");
  for (int i = 0; i < 3; ++i) {
    const LinExpr d = p_c[i] - p_prev[i];
    b.add_le(d - step_max[i]);
    b.add_le(step_min[i] - d);
  }
  return 6;
}

double reachability_linear_violation(const Eigen::Vector3d& p_c, const Eigen::Vector3d& p_prev,
                                     const Eigen::Vector3d& step_min, const Eigen::Vector3d& step_max) {
  const Eigen::Vector3d d = p_c - p_prev;
  return std::max({0.0, (d - step_max).maxCoeff(), (step_min - d).maxCoeff()});
}

YawModel::YawModel(std::vector<double> breakpoints) : breaks_(std::move(breakpoints)) {
  if (breaks_.size() < 2) throw std::invalid_argument("yaw model needs at least one segment");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i] > breaks_[i - 1])) throw std::invalid_argument("yaw breakpoints are not increasing");
}

YawModel YawModel::uniform(double lo, double hi, int segments) {
  if (segments < 1 || !(hi > lo)) throw std::invalid_argument("invalid uniform yaw model");
  std::vector<double> br(static_cast<std::size_t>(segments) + 1);
  for (int k = 0; k <= segments; ++k) br[k] = lo + (hi - lo) * k / segments;
  br.back() = hi;
  return YawModel(std::move(br));
}

namespace {

double chord_slope(double (*f)(double), double a, double b) { return (f(b) - f(a)) / (b - a); }

}  // namespace

double YawModel::sin_slope(int k) const {
  return chord_slope([](double t) { return std::sin(t); }, breaks_[k], breaks_[k + 1]);
}
double YawModel::sin_intercept(int k) const { return std::sin(breaks_[k]) - sin_slope(k) * breaks_[k]; }
double YawModel::cos_slope(int k) const {
  return chord_slope([](double t) { return std::cos(t); }, breaks_[k], breaks_[k + 1]);
}
double YawModel::cos_intercept(int k) const { return std::cos(breaks_[k]) - cos_slope(k) * breaks_[k]; }

int YawModel::segment(double theta) const {
  const auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end() - 1, theta);
  return static_cast<int>(it - breaks_.begin()) - 1;
}

double YawModel::pwa_sin(double theta) const {
  theta = std::clamp(theta, lo(), hi());
  const int k = segment(theta);
  return sin_slope(k) * theta + sin_intercept(k);
}

double YawModel::pwa_cos(double theta) const {
  theta = std::clamp(theta, lo(), hi());
  const int k = segment(theta);
  return cos_slope(k) * theta + cos_intercept(k);
}

int pwa_rotation_rows(ProgramBuilder& b, const YawExprs& yaw, const YawModel& model) {
  const int l = model.segments();
  if (static_cast<int>(yaw.S.size()) != l || static_cast<int>(yaw.C.size()) != l)
    throw std::invalid_argument("segment selector count does not match the yaw model");
  int rows = 0;
  auto add_le = [&](const LinExpr& e) {
    if (e.terms.empty()) {
      if (e.constant > 1e-12) throw std::invalid_argument("fixed yaw selectors are inconsistent");
      return;
    }
    b.add_le(e);
    ++rows;
  };
  LinExpr ssum(-1.0), csum(-1.0);
  for (int k = 0; k < l; ++k) {
    ssum += yaw.S[k];
    csum += yaw.C[k];
  }
  for (const LinExpr* s : {&ssum, &csum}) {
    if (s->terms.empty()) {
      if (std::abs(s->constant) > 1e-12) throw std::invalid_argument("fixed yaw selectors do not sum to one");
      continue;
    }
    b.add_eq(*s);
    ++rows;
  }
  add_le(model.lo() - yaw.theta);
  add_le(yaw.theta - model.hi());
  for (const LinExpr* v : {&yaw.sin, &yaw.cos}) {
    add_le(*v - 1.0);
    add_le(-1.0 - *v);
  }
  const double lo = model.lo(), hi = model.hi();
  for (int k = 0; k < l; ++k) {
    const double a = model.breakpoints()[k], c = model.breakpoints()[k + 1];
    for (const auto& [sel, is_sin] : {std::pair{&yaw.S[k], true}, std::pair{&yaw.C[k], false}}) {
      const LinExpr off = 1.0 - *sel;
      if (off.terms.empty() && off.constant == 1.0) continue;  // segment excluded
      add_le((a - yaw.theta) - (a - lo) * off);
      add_le((yaw.theta - c) - (hi - c) * off);
      const double slope = is_sin ? model.sin_slope(k) : model.cos_slope(k);
      const double icpt = is_sin ? model.sin_intercept(k) : model.cos_intercept(k);
      const LinExpr& val = is_sin ? yaw.sin : yaw.cos;
      const LinExpr dev = val - (slope * yaw.theta + icpt);
      const double M = 1.0 + std::max(std::abs(slope * lo + icpt), std::abs(slope * hi + icpt));
      add_le(dev - M * off);
      add_le(-1.0 * dev - M * off);
    }
  }
  return rows;
}

namespace {

Eigen::Vector2d rotate(double s, double c, const Eigen::Vector2d& o) {
  return {c * o.x() - s * o.y(), s * o.x() + c * o.y()};
}

}  // namespace

int reachability_soc(ProgramBuilder& b, const E3& p_c, const E3& p_prev, const LinExpr& sin_prev,
                     const LinExpr& cos_prev, const ReachSettings& reach) {
  if (!(reach.radius1 >= 0.0) || !(reach.radius2 >= 0.0)) throw std::invalid_argument("negative reach radius");
  for (const auto& [o, d] : {std::pair{reach.focus1, reach.radius1}, std::pair{reach.focus2, reach.radius2}}) {
    const LinExpr cx = p_prev[0] + o.x() * cos_prev - o.y() * sin_prev;
    const LinExpr cy = p_prev[1] + o.x() * sin_prev + o.y() * cos_prev;
    b.add_soc({LinExpr(d), p_c[0] - cx, p_c[1] - cy});
  }
  return 2;
}

bool reachability_soc_satisfied(const Eigen::Vector3d& p_c, const Eigen::Vector3d& p_prev, double sin_prev,
                                double cos_prev, const ReachSettings& reach, double tol) {
  const Eigen::Vector2d q = p_c.head<2>() - p_prev.head<2>();
  return (q - rotate(sin_prev, cos_prev, reach.focus1)).norm() <= reach.radius1 + tol &&
         (q - rotate(sin_prev, cos_prev, reach.focus2)).norm() <= reach.radius2 + tol;
}

}  // namespace cscp::mip
