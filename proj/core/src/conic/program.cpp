#include "cscp/conic/program.hpp"

#include <stdexcept>

namespace cscp::conic {

bool ConicProgram::well_formed() const {
  const int n = num_vars();
  if (!cone.valid()) return false;
  if (eq_matrix.cols() != n || ineq_matrix.cols() != n) return false;
  if (eq_matrix.rows() != eq_rhs.size()) return false;
  if (ineq_matrix.rows() != ineq_rhs.size()) return false;
  return ineq_matrix.rows() == cone.dim();
}

LinExpr LinExpr::var(int index, double coef) {
  LinExpr e;
  e.terms.emplace_back(index, coef);
  return e;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  constant += o.constant;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  for (const auto& [i, c] : o.terms) terms.emplace_back(i, -c);
  constant -= o.constant;
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  for (auto& t : terms) t.second *= s;
  constant *= s;
  return *this;
}

double LinExpr::eval(const Vec& x) const {
  double v = constant;
  for (const auto& [i, c] : terms) v += c * x[i];
  return v;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator-(LinExpr a) { return a *= -1.0; }
LinExpr operator*(double s, LinExpr a) { return a *= s; }
LinExpr operator*(LinExpr a, double s) { return a *= s; }

int ProgramBuilder::add_var(std::string tag) {
  cost_.push_back(0.0);
  tags_.push_back(std::move(tag));
  return static_cast<int>(cost_.size()) - 1;
}

int ProgramBuilder::add_vars(int n, const std::string& tag) {
  const int first = num_vars();
  for (int i = 0; i < n; ++i) add_var(tag);
  return first;
}

void ProgramBuilder::add_eq(const LinExpr& e) { eq_.push_back(e); }
void ProgramBuilder::add_le(const LinExpr& e) { le_.push_back(e); }

void ProgramBuilder::add_soc(const std::vector<LinExpr>& tu) {
  if (tu.empty()) throw std::invalid_argument("empty cone");
  soc_.push_back(tu);
}

void ProgramBuilder::add_squared_norm_le(const LinExpr& t, const std::vector<LinExpr>& v) {
  // ||v||^2 <= t  <=>  ||(2v, t - 1)|| <= t + 1
  std::vector<LinExpr> tu;
  tu.reserve(v.size() + 2);
  tu.push_back(t + 1.0);
  tu.push_back(t - 1.0);
  for (const auto& e : v) tu.push_back(2.0 * e);
  soc_.push_back(std::move(tu));
}

void ProgramBuilder::add_cost(const LinExpr& e) {
  for (const auto& [i, c] : e.terms) cost_[i] += c;
  cost_constant_ += e.constant;
}

int ProgramBuilder::add_quadratic_cost(double weight, const std::vector<LinExpr>& v,
                                       const std::string& tag) {
  const int t = add_var(tag.empty() ? "epi" : tag);
  add_squared_norm_le(LinExpr::var(t), v);
  cost_[t] += weight;
  return t;
}

ConicProgram ProgramBuilder::build() const {
  ConicProgram p;
  const int n = num_vars();
  p.objective = Eigen::Map<const Vec>(cost_.data(), n);
  p.objective_offset = cost_constant_;

  std::vector<Eigen::Triplet<double>> trip;
  p.eq_rhs.resize(num_eq());
  for (int r = 0; r < num_eq(); ++r) {
    for (const auto& [i, c] : eq_[r].terms) trip.emplace_back(r, i, c);
    p.eq_rhs[r] = -eq_[r].constant;
  }
  p.eq_matrix.resize(num_eq(), n);
  p.eq_matrix.setFromTriplets(trip.begin(), trip.end());

  trip.clear();
  p.cone.nonneg = num_le();
  for (const auto& c : soc_) p.cone.soc_dims.push_back(static_cast<int>(c.size()));
  p.ineq_rhs.resize(p.cone.dim());
  int row = 0;
  // e <= 0  ->  s = -e >= 0  ->  G = coef(e), h = -const(e)
  for (const auto& e : le_) {
    for (const auto& [i, c] : e.terms) trip.emplace_back(row, i, c);
    p.ineq_rhs[row++] = -e.constant;
  }
  // cone entry s = e  ->  G = -coef(e), h = const(e)
  for (const auto& cone : soc_) {
    for (const auto& e : cone) {
      for (const auto& [i, c] : e.terms) trip.emplace_back(row, i, -c);
      p.ineq_rhs[row++] = e.constant;
    }
  }
  p.ineq_matrix.resize(row, n);
  p.ineq_matrix.setFromTriplets(trip.begin(), trip.end());
  p.eq_matrix.makeCompressed();
  p.ineq_matrix.makeCompressed();
  return p;
}

}  // namespace cscp::conic
