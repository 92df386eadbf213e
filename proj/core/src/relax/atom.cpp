#include "cscp/relax/atom.hpp"

#include <stdexcept>

namespace cscp::relax {

std::vector<LinExpr> BilinearAtom::sum() const {
  std::vector<LinExpr> s(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) s[i] = left[i] + right[i];
  return s;
}

std::vector<LinExpr> BilinearAtom::diff() const {
  std::vector<LinExpr> s(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) s[i] = left[i] - right[i];
  return s;
}

LinExpr BilinearAtom::product() const {
  return 0.25 * (LinExpr::var(plus_var) - LinExpr::var(minus_var));
}

double BilinearAtom::exact_product(const Vec& x) const {
  double v = 0.0;
  for (std::size_t i = 0; i < left.size(); ++i) v += left[i].eval(x) * right[i].eval(x);
  return v;
}

double BilinearAtom::exact_plus(const Vec& x) const {
  double v = 0.0;
  for (const auto& e : sum()) v += e.eval(x) * e.eval(x);
  return v;
}

double BilinearAtom::exact_minus(const Vec& x) const {
  double v = 0.0;
  for (const auto& e : diff()) v += e.eval(x) * e.eval(x);
  return v;
}

BilinearAtom make_atom(ProgramBuilder& b, std::vector<LinExpr> left, std::vector<LinExpr> right,
                       const std::string& tag) {
  if (left.size() != right.size() || left.empty()) throw std::invalid_argument("atom sides differ in length");
  BilinearAtom a;
  a.left = std::move(left);
  a.right = std::move(right);
  a.plus_var = b.add_var(tag + ".plus");
  a.minus_var = b.add_var(tag + ".minus");
  return a;
}

std::array<BilinearAtom, 3> decompose_cross_product(ProgramBuilder& b, const std::array<LinExpr, 3>& l,
                                                    const std::array<LinExpr, 3>& f, const std::string& tag) {
  return {make_atom(b, {-l[2], l[1]}, {f[1], f[2]}, tag + ".x"),
          make_atom(b, {l[2], -l[0]}, {f[0], f[2]}, tag + ".y"),
          make_atom(b, {-l[1], l[0]}, {f[0], f[1]}, tag + ".z")};
}

TimeAtoms decompose_time_bilinears(ProgramBuilder& b, const std::array<LinExpr, 3>& lin_momentum,
                                   const std::array<LinExpr, 3>& torque_sum,
                                   const std::array<LinExpr, 3>& force_sum, const LinExpr& dt) {
  TimeAtoms t;
  const char* axis[3] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    t.momentum[i] = make_atom(b, {lin_momentum[i]}, {dt}, std::string("ldt.") + axis[i]);
    t.torque[i] = make_atom(b, {torque_sum[i]}, {dt}, std::string("kdt.") + axis[i]);
    t.force[i] = make_atom(b, {force_sum[i]}, {dt}, std::string("fdt.") + axis[i]);
  }
  return t;
}

std::array<NumericAtom, 3> cross_atoms(const Eigen::Vector3d& l, const Eigen::Vector3d& f) {
  return {NumericAtom{{-l.z(), l.y()}, {f.y(), f.z()}},
          NumericAtom{{l.z(), -l.x()}, {f.x(), f.z()}},
          NumericAtom{{-l.y(), l.x()}, {f.x(), f.y()}}};
}

}  // namespace cscp::relax
