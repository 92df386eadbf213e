#pragma once

#include <vector>

#include <Eigen/Core>

#include "cscp/mip/settings.hpp"
#include "cscp/mip/surface.hpp"

namespace cscp::mip {

// step_min <= p_c - p_prev <= step_max componentwise. Returns the row count.
int reachability_linear(ProgramBuilder& b, const E3& p_c, const E3& p_prev, const Eigen::Vector3d& step_min,
                        const Eigen::Vector3d& step_max);

// Largest violation of the box rows for a concrete step (0 when feasible).
double reachability_linear_violation(const Eigen::Vector3d& p_c, const Eigen::Vector3d& p_prev,
                                     const Eigen::Vector3d& step_min, const Eigen::Vector3d& step_max);

// Piecewise affine chord interpolation of sine and cosine on increasing yaw breakpoints.
class YawModel {
 public:
  explicit YawModel(std::vector<double> breakpoints);
  static YawModel uniform(double lo, double hi, int segments);

  int segments() const { return static_cast<int>(breaks_.size()) - 1; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  double lo() const { return breaks_.front(); }
  double hi() const { return breaks_.back(); }
  // Chord slope and intercept of segment k: value = slope * theta + intercept.
  double sin_slope(int k) const;
  double sin_intercept(int k) const;
  double cos_slope(int k) const;
  double cos_intercept(int k) const;
  // Segment containing theta (the lower one at an interior breakpoint); theta is clamped to the range.
  int segment(double theta) const;
  double pwa_sin(double theta) const;
  double pwa_cos(double theta) const;

 private:
  std::vector<double> breaks_;
};

// Yaw quantities of one footstep. S and C hold the segment selectors (variables in [0, 1] or
// constants when fixed).
struct YawExprs {
  LinExpr theta;
  LinExpr sin;
  LinExpr cos;
  std::vector<LinExpr> S;
  std::vector<LinExpr> C;
};

// Segment selection sum S = sum C = 1, the validity box of each segment and the conditional affine
// sine/cosine definitions, all with exact big-M constants over the yaw range and [-1, 1].
int pwa_rotation_rows(ProgramBuilder& b, const YawExprs& yaw, const YawModel& model);

// ||p_c,xy - (p_prev,xy + R(yaw_prev) o_i)|| <= d_i for both foci, with R built from the
// approximated sine and cosine of the previous footstep. Returns the number of cones.
int reachability_soc(ProgramBuilder& b, const E3& p_c, const E3& p_prev, const LinExpr& sin_prev,
                     const LinExpr& cos_prev, const ReachSettings& reach);

// Direct check of the two discs for concrete values.
bool reachability_soc_satisfied(const Eigen::Vector3d& p_c, const Eigen::Vector3d& p_prev, double sin_prev,
                                double cos_prev, const ReachSettings& reach, double tol = 0.0);

}  // namespace cscp::mip
