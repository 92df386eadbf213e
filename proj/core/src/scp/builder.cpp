#include "cscp/scp/builder.hpp"

#include <array>
#include <optional>
#include <stdexcept>

#include "cscp/model/integrate.hpp"
#include "cscp/scp/torque.hpp"

namespace cscp::scp {

using model::Vec3;
using E3 = std::array<LinExpr, 3>;

namespace {

E3 vars3(int base) { return {LinExpr::var(base), LinExpr::var(base + 1), LinExpr::var(base + 2)}; }
E3 const3(const Vec3& v) { return {LinExpr(v.x()), LinExpr(v.y()), LinExpr(v.z())}; }
E3 add(const E3& a, const E3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
E3 sub(const E3& a, const E3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
E3 scale(double s, const E3& a) { return {s * a[0], s * a[1], s * a[2]}; }
LinExpr dot(const Vec3& v, const E3& a) { return v.x() * a[0] + v.y() * a[1] + v.z() * a[2]; }
std::vector<LinExpr> vec(const E3& a) { return {a[0], a[1], a[2]}; }
void append(std::vector<LinExpr>& out, const E3& a) { out.insert(out.end(), a.begin(), a.end()); }

double gravity_norm(const model::ProblemSpec& spec) {
  const double g = spec.gravity.norm();
  return g > 1e-9 ? g : 9.81;
}

}  // namespace

double Subproblem::cost(const Vec& x) const {
  double c = 0.0;
  for (const auto& term : costs) {
    double s = 0.0;
    for (const auto& r : term.residual) {
      const double v = r.eval(x);
      s += v * v;
    }
    c += term.weight * s;
  }
  return c;
}

Subproblem build_subproblem(const model::ProblemSpec& spec, const ScpSettings& settings,
                            const relax::RelaxationState& state) {
  if (settings.torque_limits && !spec.torque_limits)
    throw std::invalid_argument("torque limits requested but no torque data supplied");
  for (const auto& ph : spec.schedule.phases())
    if (ph.surface < 0 || ph.surface >= static_cast<int>(spec.surfaces.size()))
      throw std::invalid_argument("active contact without a surface assignment");

  const int N = spec.horizon();
  const int ne = spec.num_endeffectors();
  const bool opt_time = settings.optimize_time && spec.dt_max > spec.dt_min;
  const bool opt_contacts = settings.optimize_contacts;
  const bool torque = settings.torque_limits;

  Subproblem out;
  out.scaling = {spec.mass, spec.mass * gravity_norm(spec), spec.dt_init};
  const double m = spec.mass;
  const double g0 = gravity_norm(spec);
  const double dt0 = spec.dt_init;
  auto& mp = out.map;
  mp.horizon = N;
  mp.num_ee = ne;
  mp.com.resize(N);
  mp.lin.resize(N);
  mp.ang.resize(N);
  mp.dt.assign(N, -1);
  mp.force.assign(N * ne, -1);
  mp.cop.assign(N * ne, -1);
  mp.lambda.assign(N * ne, -1);
  mp.kappa_atoms.assign(N * ne, -1);
  mp.gamma_atoms.assign(N * ne, -1);
  mp.time_atoms.assign(N, -1);
  mp.position.assign(spec.schedule.phases().size(), -1);

  conic::ProgramBuilder b;
  for (int t = 1; t <= N; ++t) {
    mp.com[t - 1] = b.add_vars(3, "com");
    mp.lin[t - 1] = b.add_vars(3, "lin");
    mp.ang[t - 1] = b.add_vars(3, "ang");
    if (opt_time) mp.dt[t - 1] = b.add_var("dt");
    for (int e = 0; e < ne; ++e) {
      if (!spec.schedule.active(e, t)) continue;
      const int s = mp.slot(t, e);
      mp.force[s] = b.add_vars(3, "force");
      mp.cop[s] = b.add_vars(2, "cop");
      mp.lambda[s] = b.add_var("lambda");
    }
  }
  if (opt_contacts)
    for (std::size_t k = 0; k < mp.position.size(); ++k) mp.position[k] = b.add_vars(3, "position");

  const auto& x0 = spec.initial_state;
  auto com = [&](int t) { return t == 0 ? const3(x0.com) : vars3(mp.com[t - 1]); };
  auto lin = [&](int t) { return t == 0 ? const3(x0.lin_momentum / m) : vars3(mp.lin[t - 1]); };
  auto ang = [&](int t) { return t == 0 ? const3(x0.ang_momentum / m) : vars3(mp.ang[t - 1]); };
  auto pos = [&](int e, int t) {
    const int k = spec.schedule.phase_at(e, t);
    return mp.position[k] >= 0 ? vars3(mp.position[k]) : const3(spec.schedule.phases()[k].position);
  };

  // Relaxation rows are emitted after every primary column exists so that column indices do
  // not depend on the relaxation mode or iteration.
  auto push_atoms = [&](const auto& atoms) {
    const int first = static_cast<int>(out.atoms.size());
    for (const auto& a : atoms) out.atoms.push_back(a);
    return first;
  };
  auto atom_product = [&](int first) {
    return E3{out.atoms[first].product(), out.atoms[first + 1].product(), out.atoms[first + 2].product()};
  };

  std::vector<std::vector<std::optional<WrenchExpr>>> wrenches(N, std::vector<std::optional<WrenchExpr>>(ne));
  RowCounts& rc = out.rows;

  for (int t = 1; t <= N; ++t) {
    E3 fsum = const3(Vec3::Zero());
    E3 ksum = const3(Vec3::Zero());
    const E3 c_t = com(t);
    for (int e = 0; e < ne; ++e) {
      if (!spec.schedule.active(e, t)) continue;
      const int s = mp.slot(t, e);
      const auto& R = spec.rotation(e, t);
      const auto& ee = spec.endeffectors[e];
      const E3 f = vars3(mp.force[s]);
      const LinExpr zx = LinExpr::var(mp.cop[s]);
      const LinExpr zy = LinExpr::var(mp.cop[s] + 1);
      const LinExpr lam = LinExpr::var(mp.lambda[s]);
      E3 rz;
      for (int i = 0; i < 3; ++i) rz[i] = R(i, 0) * zx + R(i, 1) * zy;
      const E3 p = pos(e, t);

      E3 kappa;
      E3 gamma;
      if (torque) {
        mp.gamma_atoms[s] = push_atoms(relax::decompose_cross_product(b, rz, f, "gamma"));
        gamma = atom_product(mp.gamma_atoms[s]);
        for (int i = 0; i < 3; ++i) gamma[i] += R(i, 2) * lam;
        mp.kappa_atoms[s] = push_atoms(relax::decompose_cross_product(b, sub(p, c_t), f, "kappa"));
        kappa = add(atom_product(mp.kappa_atoms[s]), gamma);
      } else {
        mp.kappa_atoms[s] = push_atoms(relax::decompose_cross_product(b, add(sub(p, c_t), rz), f, "kappa"));
        kappa = atom_product(mp.kappa_atoms[s]);
        for (int i = 0; i < 3; ++i) kappa[i] += R(i, 2) * lam;
      }
      wrenches[t - 1][e] = WrenchExpr{f, gamma};
      fsum = add(fsum, f);
      ksum = add(ksum, kappa);

      const double mu = spec.friction_at(e, t);
      b.add_soc({mu * dot(R.col(2), f), dot(R.col(0), f), dot(R.col(1), f)});
      ++rc.friction_socs;
      b.add_le(zx - ee.cop_max.x());
      b.add_le(zy - ee.cop_max.y());
      b.add_le(LinExpr(ee.cop_min.x()) - zx);
      b.add_le(LinExpr(ee.cop_min.y()) - zy);
      rc.cop_rows += 4;
      const E3 d = sub(p, c_t);
      b.add_soc({LinExpr(ee.max_reach), d[0], d[1], d[2]});
      ++rc.reach_socs;
    }

    const E3 c_prev = com(t - 1), l_prev = lin(t - 1), k_prev = ang(t - 1);
    const E3 l_t = lin(t), k_t = ang(t);
    if (!opt_time) {
      for (int i = 0; i < 3; ++i) {
        b.add_eq(c_t[i] - c_prev[i] - dt0 * l_t[i]);
        b.add_eq(l_t[i] - l_prev[i] - (dt0 * g0) * fsum[i] - spec.gravity[i] * dt0);
        b.add_eq(k_t[i] - k_prev[i] - (dt0 * g0) * ksum[i]);
      }
    } else {
      const LinExpr tau = LinExpr::var(mp.dt[t - 1]);
      const auto ta = relax::decompose_time_bilinears(b, l_t, ksum, fsum, tau);
      const int first = static_cast<int>(out.atoms.size());
      mp.time_atoms[t - 1] = first;
      for (const auto* group : {&ta.momentum, &ta.torque, &ta.force})
        for (const auto& a : *group) out.atoms.push_back(a);
      for (int i = 0; i < 3; ++i) {
        b.add_eq(c_t[i] - c_prev[i] - dt0 * ta.momentum[i].product());
        b.add_eq(l_t[i] - l_prev[i] - (spec.gravity[i] * dt0) * tau - (dt0 * g0) * ta.force[i].product());
        b.add_eq(k_t[i] - k_prev[i] - (dt0 * g0) * ta.torque[i].product());
      }
      b.add_le(LinExpr(spec.dt_min / dt0) - tau);
      b.add_le(tau - spec.dt_max / dt0);
      rc.timestep_rows += 2;
    }
    rc.dynamics_eq += 9;
  }

  if (opt_contacts) {
    for (std::size_t k = 0; k < mp.position.size(); ++k) {
      const auto& ph = spec.schedule.phases()[k];
      const auto& surf = spec.surfaces[ph.surface];
      const E3 p = vars3(mp.position[k]);
      for (int r = 0; r < surf.lateral_A().rows(); ++r) {
        b.add_le(dot(surf.lateral_A().row(r).transpose(), p) - surf.lateral_b()[r]);
        ++rc.membership_rows;
      }
      b.add_eq(dot(surf.normal(), p) - surf.plane_offset());
      ++rc.membership_rows;
    }
  }

  if (torque) rc.torque_rows = apply_torque_limits(b, *spec.torque_limits, wrenches, out.scaling.force);

  auto add_cost = [&](double w, std::vector<LinExpr> res) {
    if (w <= 0.0 || res.empty()) return;
    b.add_quadratic_cost(w, res, "cost");
    out.costs.push_back({w, std::move(res)});
  };
  const auto& W = spec.weights;
  const auto& refs = spec.references;
  add_cost(W.com_terminal, vec(sub(com(N), const3(spec.com_target()))));
  {
    std::vector<LinExpr> r = vec(sub(lin(N), const3(refs.lin_momentum_target / m)));
    append(r, sub(ang(N), const3(refs.ang_momentum_target / m)));
    add_cost(W.momenta_terminal, std::move(r));
  }
  for (int t = 1; t <= N; ++t) {
    std::vector<LinExpr> run = vec(lin(t));
    append(run, ang(t));
    add_cost(W.momenta_running, std::move(run));
    std::vector<LinExpr> rate = vec(scale(1.0 / dt0, sub(lin(t), lin(t - 1))));
    append(rate, scale(1.0 / dt0, sub(ang(t), ang(t - 1))));
    add_cost(W.momenta_rate, std::move(rate));
    std::vector<LinExpr> forces, torques;
    for (int e = 0; e < ne; ++e) {
      if (!spec.schedule.active(e, t)) continue;
      const int s = mp.slot(t, e);
      append(forces, vars3(mp.force[s]));
      torques.push_back(LinExpr::var(mp.lambda[s]));
    }
    add_cost(W.force, std::move(forces));
    add_cost(W.torque, std::move(torques));
    if (opt_time) add_cost(W.time_regularization, {dt0 * LinExpr::var(mp.dt[t - 1]) - dt0});
    if (!refs.lin_momentum.empty() || !refs.ang_momentum.empty()) {
      std::vector<LinExpr> cons;
      if (!refs.lin_momentum.empty()) append(cons, sub(lin(t), const3(refs.lin_momentum[t - 1] / m)));
      if (!refs.ang_momentum.empty()) append(cons, sub(ang(t), const3(refs.ang_momentum[t - 1] / m)));
      add_cost(W.momenta_consensus, std::move(cons));
    }
    if (opt_contacts && !refs.endeffector_positions.empty()) {
      std::vector<LinExpr> cons;
      for (int e = 0; e < ne; ++e) {
        if (!spec.schedule.active(e, t) || refs.endeffector_positions[e].empty()) continue;
        append(cons, sub(pos(e, t), const3(refs.endeffector_positions[e][t - 1])));
      }
      add_cost(W.endeffector_consensus, std::move(cons));
    }
  }

  for (const auto& a : out.atoms) relax::relax_atom(b, a, state);
  if (state.has_anchor()) {
    rc.trust_cuts = state.mode == relax::Mode::TrustRegion ? 2 * static_cast<int>(out.atoms.size()) : 0;
    rc.soft_penalties = state.mode == relax::Mode::SoftConstraint ? 2 * static_cast<int>(out.atoms.size()) : 0;
  }
  out.program = b.build();
  return out;
}

model::Trajectory extract_trajectory(const Subproblem& sub, const model::ProblemSpec& spec, const Vec& x) {
  const auto& mp = sub.map;
  const int N = mp.horizon;
  const double m = sub.scaling.mass;
  const double F = sub.scaling.force;
  model::Trajectory tr = model::make_controls(spec);
  tr.states[0] = spec.initial_state;
  for (int t = 1; t <= N; ++t) {
    auto& st = tr.states[t];
    st.com = x.segment<3>(mp.com[t - 1]);
    st.lin_momentum = m * x.segment<3>(mp.lin[t - 1]);
    st.ang_momentum = m * x.segment<3>(mp.ang[t - 1]);
    tr.timesteps[t - 1] = mp.dt[t - 1] >= 0 ? sub.scaling.dt0 * x[mp.dt[t - 1]] : sub.scaling.dt0;
    for (int e = 0; e < mp.num_ee; ++e) {
      auto& s = tr.samples[t - 1][e];
      if (!s.active) continue;
      const int slot = mp.slot(t, e);
      const int k = spec.schedule.phase_at(e, t);
      if (mp.position[k] >= 0) s.position = x.segment<3>(mp.position[k]);
      s.wrench.force = F * x.segment<3>(mp.force[slot]);
      s.wrench.cop = x.segment<2>(mp.cop[slot]);
      s.wrench.normal_torque = F * x[mp.lambda[slot]];
      s.wrench.torque = model::contact_torque(spec.rotation(e, t), s.wrench);
      s.wrench.com_torque = (s.position - st.com).cross(s.wrench.force) + s.wrench.torque;
    }
  }
  return tr;
}

model::Trajectory nominal_guess(const model::ProblemSpec& spec) {
  model::Trajectory tr = model::make_controls(spec);
  const int N = spec.horizon();
  const Vec3 c0 = spec.initial_state.com;
  const Vec3 c1 = spec.com_target();
  const Vec3 lin = spec.mass * (c1 - c0) / (N * spec.dt_init);
  for (int t = 1; t <= N; ++t) {
    auto& st = tr.states[t];
    st.com = c0 + (c1 - c0) * (static_cast<double>(t) / N);
    st.lin_momentum = lin;
    st.ang_momentum.setZero();
    int active = 0;
    for (const auto& s : tr.samples[t - 1]) active += s.active ? 1 : 0;
    for (auto& s : tr.samples[t - 1])
      if (s.active) s.wrench.force = -spec.mass * spec.gravity / active;
  }
  return tr;
}

Vec embed_trajectory(const Subproblem& sub, const model::ProblemSpec& spec, const model::Trajectory& traj) {
  const auto& mp = sub.map;
  const double m = sub.scaling.mass;
  const double F = sub.scaling.force;
  Vec x = Vec::Zero(sub.program.num_vars());
  for (int t = 1; t <= mp.horizon; ++t) {
    const auto& st = traj.states[t];
    x.segment<3>(mp.com[t - 1]) = st.com;
    x.segment<3>(mp.lin[t - 1]) = st.lin_momentum / m;
    x.segment<3>(mp.ang[t - 1]) = st.ang_momentum / m;
    if (mp.dt[t - 1] >= 0) x[mp.dt[t - 1]] = traj.timesteps[t - 1] / sub.scaling.dt0;
    for (int e = 0; e < mp.num_ee; ++e) {
      const auto& s = traj.samples[t - 1][e];
      if (!s.active) continue;
      const int slot = mp.slot(t, e);
      const int k = spec.schedule.phase_at(e, t);
      if (mp.position[k] >= 0) x.segment<3>(mp.position[k]) = s.position;
      x.segment<3>(mp.force[slot]) = s.wrench.force / F;
      x.segment<2>(mp.cop[slot]) = s.wrench.cop;
      x[mp.lambda[slot]] = s.wrench.normal_torque / F;
    }
  }
  for (const auto& a : sub.atoms) {
    x[a.plus_var] = a.exact_plus(x);
    x[a.minus_var] = a.exact_minus(x);
  }
  return x;
}

}  // namespace cscp::scp
