#include "cscp/mip/contact_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cscp/relax/atom.hpp"
#include "cscp/relax/relax.hpp"

namespace cscp::mip {

using model::Vec3;
using conic::Vec;

namespace {

E3 vars3(int base) { return {LinExpr::var(base), LinExpr::var(base + 1), LinExpr::var(base + 2)}; }
E3 const3(const Vec3& v) { return {LinExpr(v.x()), LinExpr(v.y()), LinExpr(v.z())}; }
E3 sub(const E3& a, const E3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
std::vector<LinExpr> vec(const E3& a) { return {a[0], a[1], a[2]}; }
void append(std::vector<LinExpr>& out, const E3& a) { out.insert(out.end(), a.begin(), a.end()); }

double gravity_norm(const model::ProblemSpec& spec) {
  const double g = spec.gravity.norm();
  return g > 1e-9 ? g : 9.81;
}

}  // namespace

ContactProblem::ContactProblem(model::ProblemSpec spec, MipSettings settings)
    : spec_(std::move(spec)),
      settings_(std::move(settings)),
      yaw_(YawModel::uniform(settings_.yaw_min, settings_.yaw_max, settings_.yaw_segments)) {
  if (spec_.surfaces.empty()) throw std::invalid_argument("contact planning needs at least one surface");
  if (settings_.iters_per_node < 1) throw std::invalid_argument("iters_per_node must be at least 1");
  if (!(settings_.force_limit > 0.0)) throw std::invalid_argument("force_limit must be positive");
  if (!(settings_.gap_tol >= 0.0) || settings_.node_limit < 1) throw std::invalid_argument("invalid search limits");
  {
    // Check everything else by pretending the planned contacts sit on the first surface.
    model::ProblemSpec probe = spec_;
    for (auto& ph : probe.schedule.phases())
      if (ph.surface < 0) ph.surface = 0;
    probe.validate();
  }
  box_ = terrain_bounding_box(spec_.surfaces, settings_.box_margin);
  for (const auto& s : spec_.surfaces) halfspaces_.push_back(surface_halfspaces(s));

  const auto& phases = spec_.schedule.phases();
  const int nc = num_contacts();
  order_.resize(nc);
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
    if (phases[a].first != phases[b].first) return phases[a].first < phases[b].first;
    return phases[a].endeffector < phases[b].endeffector;
  });
  previous_.assign(nc, -1);
  first_binary_.assign(nc, -1);
  for (int i = 1; i < nc; ++i) previous_[order_[i]] = order_[i - 1];
  const int ns = num_surfaces();
  const int l = yaw_.segments();
  for (int c : order_) {
    if (fixed(c)) continue;
    planned_.push_back(c);
    first_binary_[c] = num_binaries();
    for (int r = 0; r < ns; ++r) binaries_.push_back({c, r});
    if (settings_.rotated_reach)
      for (int k = 0; k < 2 * l; ++k) binaries_.push_back({c, ns + k});
  }
}

int count_fractional(const std::vector<double>& values, double tol) {
  int n = 0;
  for (double v : values) n += std::min(std::abs(v), std::abs(1.0 - v)) > tol ? 1 : 0;
  return n;
}

namespace {

struct NodeProgram {
  conic::ConicProgram program;
  std::vector<int> com, lin, ang, force;  // force by slot (t-1)*ne+e
  std::vector<int> position, theta, sn, cs;
  std::vector<LinExpr> binary;  // expression of every binary
  std::vector<relax::BilinearAtom> atoms;
};

NodeProgram build_node(const ContactProblem& P, const Fixings& fix, const relax::RelaxationState& state) {
  const auto& spec = P.spec();
  const auto& set = P.settings();
  const auto& phases = spec.schedule.phases();
  const int N = spec.horizon();
  const int ne = spec.num_endeffectors();
  const int nc = P.num_contacts();
  const int ns = P.num_surfaces();
  const int l = P.yaw_model().segments();
  const bool rotated = set.rotated_reach;
  const double m = spec.mass;
  const double g0 = gravity_norm(spec);
  const double dt0 = spec.dt_init;
  const double F = set.force_limit;

  NodeProgram np;
  conic::ProgramBuilder b;
  np.com.resize(N);
  np.lin.resize(N);
  np.ang.resize(N);
  np.force.assign(N * ne, -1);
  for (int t = 1; t <= N; ++t) {
    np.com[t - 1] = b.add_vars(3, "com");
    np.lin[t - 1] = b.add_vars(3, "lin");
    np.ang[t - 1] = b.add_vars(3, "ang");
    for (int e = 0; e < ne; ++e)
      if (spec.schedule.active(e, t)) np.force[(t - 1) * ne + e] = b.add_vars(3, "force");
  }
  np.position.assign(nc, -1);
  np.theta.assign(nc, -1);
  np.sn.assign(nc, -1);
  np.cs.assign(nc, -1);
  for (int c : P.planned()) {
    np.position[c] = b.add_vars(3, "position");
    if (rotated) {
      np.theta[c] = b.add_var("yaw");
      np.sn[c] = b.add_var("sin");
      np.cs[c] = b.add_var("cos");
    }
  }
  np.binary.resize(P.num_binaries());
  for (int i = 0; i < P.num_binaries(); ++i) {
    if (fix[i] < 0) {
      const int v = b.add_var("binary");
      np.binary[i] = LinExpr::var(v);
      b.add_le(LinExpr::var(v) - 1.0);
      b.add_le(-1.0 * LinExpr::var(v));
    } else {
      np.binary[i] = LinExpr(static_cast<double>(fix[i]));
    }
  }

  auto pos = [&](int c) { return np.position[c] >= 0 ? vars3(np.position[c]) : const3(phases[c].position); };
  auto H = [&](int c, int r) {
    if (P.fixed(c)) return LinExpr(phases[c].surface == r ? 1.0 : 0.0);
    return np.binary[P.first_binary(c) + r];
  };
  auto yaw = [&](int c) {
    YawExprs y;
    if (P.fixed(c) || !rotated) {
      const double th = phases[c].yaw;
      y.theta = LinExpr(th);
      y.sin = LinExpr(std::sin(th));
      y.cos = LinExpr(std::cos(th));
      return y;
    }
    y.theta = LinExpr::var(np.theta[c]);
    y.sin = LinExpr::var(np.sn[c]);
    y.cos = LinExpr::var(np.cs[c]);
    const int first = P.first_binary(c) + ns;
    for (int k = 0; k < l; ++k) {
      y.S.push_back(np.binary[first + k]);
      y.C.push_back(np.binary[first + l + k]);
    }
    return y;
  };

  const Box& box = P.box();
  for (int c : P.planned()) {
    const E3 p = pos(c);
    for (int i = 0; i < 3; ++i) {
      b.add_le(p[i] - box.hi[i]);
      b.add_le(box.lo[i] - p[i]);
    }
    LinExpr hsum(-1.0);
    for (int r = 0; r < ns; ++r) {
      hsum += H(c, r);
      big_m_link(b, H(c, r), P.halfspaces(r), box, p);
    }
    if (!hsum.terms.empty()) {
      if (spec.endeffectors[phases[c].endeffector].is_hand)
        b.add_le(hsum);
      else
        b.add_eq(hsum);
    }
    const int prev = P.previous(c);
    const ReachSettings& reach = set.reach_for(phases[c].endeffector);
    if (rotated) {
      const YawExprs y = yaw(c);
      pwa_rotation_rows(b, y, P.yaw_model());
      if (prev >= 0) {
        const YawExprs yp = yaw(prev);
        b.add_le(y.theta - yp.theta - set.max_yaw_step);
        b.add_le(yp.theta - y.theta - set.max_yaw_step);
        reachability_soc(b, p, pos(prev), yp.sin, yp.cos, reach);
      }
    } else if (prev >= 0) {
      reachability_linear(b, p, pos(prev), reach.step_min, reach.step_max);
    }
  }

  const auto& x0 = spec.initial_state;
  auto com = [&](int t) { return t == 0 ? const3(x0.com) : vars3(np.com[t - 1]); };
  auto lin = [&](int t) { return t == 0 ? const3(x0.lin_momentum / m) : vars3(np.lin[t - 1]); };
  auto ang = [&](int t) { return t == 0 ? const3(x0.ang_momentum / m) : vars3(np.ang[t - 1]); };
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  for (int t = 1; t <= N; ++t) {
    E3 fsum = const3(Vec3::Zero());
    E3 ksum = const3(Vec3::Zero());
    const E3 c_t = com(t);
    for (int e = 0; e < ne; ++e) {
      if (!spec.schedule.active(e, t)) continue;
      const int c = spec.schedule.phase_at(e, t);
      const E3 p = pos(c);
      const E3 f = vars3(np.force[(t - 1) * ne + e]);
      const E3 lever = sub(p, c_t);
      b.add_soc({LinExpr(spec.endeffectors[e].max_reach), lever[0], lever[1], lever[2]});
      const auto atoms = relax::decompose_cross_product(b, lever, f, "kappa");
      for (int i = 0; i < 3; ++i) {
        np.atoms.push_back(atoms[i]);
        ksum[i] += atoms[i].product();
        fsum[i] += f[i];
      }
      // Force box, scaled by the surface selection for planned contacts.
      LinExpr on(1.0);
      if (!P.fixed(c)) {
        on = LinExpr(0.0);
        for (int r = 0; r < ns; ++r) on += H(c, r);
      }
      for (int i = 0; i < 3; ++i) {
        b.add_le(f[i] - F * on);
        b.add_le(-1.0 * f[i] - F * on);
      }
      // Inscribed friction pyramid in each candidate surface frame.
      for (int r = 0; r < ns; ++r) {
        const LinExpr h = H(c, r);
        if (h.terms.empty() && h.constant == 0.0) continue;
        const auto& R = spec.surfaces[r].rotation();
        const double mu = spec.surfaces[r].friction() * inv_sqrt2;
        for (int axis = 0; axis < 2; ++axis)
          for (double sign : {1.0, -1.0}) {
            const Vec3 a = sign * R.col(axis) - mu * R.col(2);
            const LinExpr row = a.x() * f[0] + a.y() * f[1] + a.z() * f[2];
            if (h.terms.empty())
              b.add_le(row);
            else
              b.add_le(row - F * a.lpNorm<1>() * (1.0 - h));
          }
      }
    }
    const E3 c_prev = com(t - 1), l_prev = lin(t - 1), k_prev = ang(t - 1);
    const E3 l_t = lin(t), k_t = ang(t);
    for (int i = 0; i < 3; ++i) {
      b.add_eq(c_t[i] - c_prev[i] - dt0 * l_t[i]);
      b.add_eq(l_t[i] - l_prev[i] - (dt0 * g0) * fsum[i] - spec.gravity[i] * dt0);
      b.add_eq(k_t[i] - k_prev[i] - (dt0 * g0) * ksum[i]);
    }
  }

  const auto& W = spec.weights;
  auto add_cost = [&](double w, const std::vector<LinExpr>& res) {
    if (w > 0.0 && !res.empty()) b.add_quadratic_cost(w, res, "cost");
  };
  add_cost(W.com_terminal, vec(sub(com(N), const3(spec.com_target()))));
  {
    std::vector<LinExpr> r = vec(sub(lin(N), const3(spec.references.lin_momentum_target / m)));
    append(r, sub(ang(N), const3(spec.references.ang_momentum_target / m)));
    add_cost(W.momenta_terminal, r);
  }
  for (int t = 1; t <= N; ++t) {
    std::vector<LinExpr> run = vec(lin(t));
    append(run, ang(t));
    add_cost(W.momenta_running, run);
    std::vector<LinExpr> rate;
    for (int i = 0; i < 3; ++i) rate.push_back((1.0 / dt0) * (lin(t)[i] - lin(t - 1)[i]));
    for (int i = 0; i < 3; ++i) rate.push_back((1.0 / dt0) * (ang(t)[i] - ang(t - 1)[i]));
    add_cost(W.momenta_rate, rate);
    std::vector<LinExpr> forces;
    for (int e = 0; e < ne; ++e)
      if (np.force[(t - 1) * ne + e] >= 0) append(forces, vars3(np.force[(t - 1) * ne + e]));
    add_cost(W.force, forces);
  }

  for (const auto& a : np.atoms) relax::relax_atom(b, a, state);
  np.program = b.build();
  return np;
}

bool usable(const conic::ConicSolution& s) {
  if (s.status == conic::Status::Optimal) return true;
  if (s.status != conic::Status::IterationLimit && s.status != conic::Status::NumericalFailure) return false;
  return s.primal.allFinite() && s.kkt.primal <= 1e-6 && s.kkt.dual <= 1e-6 && s.kkt.gap <= 1e-6;
}

// Infeasible by counting alone: more than one surface pinned, or a foot with every surface excluded.
bool fixings_consistent(const ContactProblem& P, const Fixings& fix) {
  const int ns = P.num_surfaces();
  const int l = P.yaw_model().segments();
  auto group_ok = [&](int first, int count, bool need_one) {
    int ones = 0, free = 0;
    for (int i = first; i < first + count; ++i) {
      ones += fix[i] == 1 ? 1 : 0;
      free += fix[i] < 0 ? 1 : 0;
    }
    return ones <= 1 && !(need_one && ones == 0 && free == 0);
  };
  for (int c : P.planned()) {
    const int first = P.first_binary(c);
    const bool hand = P.spec().endeffectors[P.spec().schedule.phases()[c].endeffector].is_hand;
    if (!group_ok(first, ns, !hand)) return false;
    if (P.settings().rotated_reach && (!group_ok(first + ns, l, true) || !group_ok(first + ns + l, l, true)))
      return false;
  }
  return true;
}

void extract(const ContactProblem& P, const NodeProgram& np, const Vec& x, NodeSolution& out) {
  const auto& spec = P.spec();
  const auto& phases = spec.schedule.phases();
  const int N = spec.horizon();
  const int ne = spec.num_endeffectors();
  const double m = spec.mass;
  const double Fs = m * gravity_norm(spec);
  out.binaries.resize(np.binary.size());
  for (std::size_t i = 0; i < np.binary.size(); ++i) out.binaries[i] = np.binary[i].eval(x);
  const int nc = P.num_contacts();
  out.positions.resize(nc);
  out.yaw.resize(nc);
  out.sin.resize(nc);
  out.cos.resize(nc);
  for (int c = 0; c < nc; ++c) {
    out.positions[c] = np.position[c] >= 0 ? Vec3(x.segment<3>(np.position[c])) : phases[c].position;
    if (np.theta[c] >= 0) {
      out.yaw[c] = x[np.theta[c]];
      out.sin[c] = x[np.sn[c]];
      out.cos[c] = x[np.cs[c]];
    } else {
      out.yaw[c] = phases[c].yaw;
      out.sin[c] = std::sin(phases[c].yaw);
      out.cos[c] = std::cos(phases[c].yaw);
    }
  }
  auto& tr = out.trajectory;
  tr = model::make_controls(spec);
  for (int t = 1; t <= N; ++t) {
    auto& st = tr.states[t];
    st.com = x.segment<3>(np.com[t - 1]);
    st.lin_momentum = m * x.segment<3>(np.lin[t - 1]);
    st.ang_momentum = m * x.segment<3>(np.ang[t - 1]);
    for (int e = 0; e < ne; ++e) {
      auto& s = tr.samples[t - 1][e];
      if (!s.active) continue;
      s.position = out.positions[spec.schedule.phase_at(e, t)];
      s.wrench.force = Fs * x.segment<3>(np.force[(t - 1) * ne + e]);
      s.wrench.com_torque = (s.position - st.com).cross(s.wrench.force);
    }
  }
}

}  // namespace

NodeSolution solve_node(const ContactProblem& P, const Fixings& fix) {
  if (static_cast<int>(fix.size()) != P.num_binaries()) throw std::invalid_argument("fixings size mismatch");
  NodeSolution out;
  if (!fixings_consistent(P, fix)) {
    out.status = conic::Status::PrimalInfeasible;
    return out;
  }
  const auto& set = P.settings();
  relax::RelaxationState state;
  state.mode = set.relaxation;
  state.rho0 = set.rho0;
  state.nu = set.nu;
  state.soft_penalty = set.soft_penalty;
  for (int k = 1; k <= set.iters_per_node; ++k) {
    state.iteration = k;
    state.slack_weight = k == 1 ? set.slack_weight : set.anchored_slack_weight;
    const NodeProgram np = build_node(P, fix, state);
    const conic::ConicSolution sol = conic::solve(np.program, set.solver);
    ++out.solves;
    if (!usable(sol)) {
      if (k == 1) out.status = sol.status;
      break;
    }
    out.status = sol.status;
    out.feasible = true;
    out.objective = sol.objective;
    extract(P, np, sol.primal, out);
    state.anchor_point = sol.primal;
  }
  return out;
}

}  // namespace cscp::mip
