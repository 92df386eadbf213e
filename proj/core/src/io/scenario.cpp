#include "cscp/io/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "cscp/util/numfmt.hpp"

namespace cscp::io {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// A JSON value together with its location.
class Node {
 public:
  Node(const json& j, std::string ptr) : j_(&j), ptr_(std::move(ptr)) {}
  const json& value() const { return *j_; }
  const std::string& ptr() const { return ptr_; }
  [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(ptr_, msg); }

  Node index(std::size_t i) const { return Node((*j_)[i], ptr_ + "/" + std::to_string(i)); }
  std::size_t size() const { return j_->size(); }

  const Node& require_array() const {
    if (!j_->is_array()) fail("expected an array");
    return *this;
  }
  const Node& require_array(std::size_t n) const {
    require_array();
    if (j_->size() != n) fail("expected " + std::to_string(n) + " entries, got " + std::to_string(j_->size()));
    return *this;
  }

  double number() const {
    if (!j_->is_number()) fail("expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("expected a positive number");
    return v;
  }
  double nonnegative() const {
    const double v = number();
    if (!(v >= 0.0)) fail("expected a non-negative number");
    return v;
  }
  // null stands for an infinite bound of the given sign.
  double bound(double infinite) const { return j_->is_null() ? infinite : number(); }
  int integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    const auto v = j_->get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail("integer out of range");
    return static_cast<int>(v);
  }
  int integer_at_least(int lo) const {
    const int v = integer();
    if (v < lo) fail("expected an integer >= " + std::to_string(lo));
    return v;
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }
  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  Eigen::VectorXd vector(std::size_t n) const {
    require_array(n);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = index(i).number();
    return v;
  }
  Eigen::VectorXd vector() const {
    require_array();
    return vector(size());
  }
  model::Vec3 vec3() const { return vector(3); }
  model::Vec2 vec2() const { return vector(2); }

 private:
  const json* j_;
  std::string ptr_;
};

// Object view that tracks consumed keys so leftovers can be rejected.
class Object {
 public:
  explicit Object(const Node& n) : node_(n) {
    if (!n.value().is_object()) n.fail("expected an object");
  }
  bool has(const std::string& key) const { return node_.value().contains(key); }
  std::optional<Node> opt(const std::string& key) {
    used_.insert(key);
    if (!has(key)) return std::nullopt;
    return Node(node_.value().at(key), node_.ptr() + "/" + escape_token(key));
  }
  Node get(const std::string& key) {
    auto n = opt(key);
    if (!n) node_.fail("missing required key \"" + key + "\"");
    return *n;
  }
  double number(const std::string& key, double fallback) {
    auto n = opt(key);
    return n ? n->number() : fallback;
  }
  double positive(const std::string& key, double fallback) {
    auto n = opt(key);
    return n ? n->positive() : fallback;
  }
  double nonnegative(const std::string& key, double fallback) {
    auto n = opt(key);
    return n ? n->nonnegative() : fallback;
  }
  int integer_at_least(const std::string& key, int lo, int fallback) {
    auto n = opt(key);
    return n ? n->integer_at_least(lo) : fallback;
  }
  bool boolean(const std::string& key, bool fallback) {
    auto n = opt(key);
    return n ? n->boolean() : fallback;
  }
  std::string string(const std::string& key, const std::string& fallback) {
    auto n = opt(key);
    return n ? n->string() : fallback;
  }
  void done() const {
    for (const auto& item : node_.value().items())
      if (!used_.count(item.key()))
        throw ScenarioError(node_.ptr() + "/" + escape_token(item.key()), "unknown key");
  }
  const Node& node() const { return node_; }

 private:
  Node node_;
  std::set<std::string> used_;
};

json vec_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json bound_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(std::isfinite(v[i]) ? json(v[i]) : json(nullptr));
  return a;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
  return a;
}

Eigen::MatrixXd parse_matrix(const Node& n, int rows, int cols) {
  n.require_array(static_cast<std::size_t>(rows));
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) m.row(r) = n.index(r).vector(cols).transpose();
  return m;
}

bool is_matrix_of_rows(const json& j) { return j.is_array() && !j.empty() && j.front().is_array(); }

relax::Mode parse_relax(const Node& n) {
  const std::string s = n.string();
  if (s == "trust") return relax::Mode::TrustRegion;
  if (s == "soft") return relax::Mode::SoftConstraint;
  n.fail("expected \"trust\" or \"soft\"");
}

std::string relax_name(relax::Mode m) { return m == relax::Mode::TrustRegion ? "trust" : "soft"; }

int endeffector_index(const Node& n, const std::vector<model::EndeffectorConfig>& ees) {
  const std::string id = n.string();
  for (std::size_t e = 0; e < ees.size(); ++e)
    if (ees[e].id == id) return static_cast<int>(e);
  n.fail("unknown endeffector \"" + id + "\"");
}

model::TerrainSurface parse_surface(const Node& n) {
  Object o(n);
  const Node corners = o.get("corners");
  corners.require_array();
  if (corners.size() < 3) corners.fail("a surface needs at least 3 corners");
  std::vector<Eigen::Vector3d> pts;
  for (std::size_t i = 0; i < corners.size(); ++i) pts.push_back(corners.index(i).vec3());
  const double mu = o.get("friction").positive();
  o.done();
  try {
    return model::TerrainSurface(std::move(pts), mu);
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
}

json surface_json(const model::TerrainSurface& s) {
  json corners = json::array();
  for (const auto& c : s.corners()) corners.push_back(vec_json(c));
  return {{"corners", corners}, {"friction", s.friction()}};
}

void parse_robot(Object o, Scenario& sc) {
  auto& spec = sc.spec;
  spec.mass = o.get("mass").positive();
  if (auto g = o.opt("gravity")) spec.gravity = g->vec3();
  if (auto ic = o.opt("initial_state")) {
    Object s(*ic);
    spec.initial_state.com = s.get("com").vec3();
    if (auto l = s.opt("lin_momentum")) spec.initial_state.lin_momentum = l->vec3();
    if (auto k = s.opt("ang_momentum")) spec.initial_state.ang_momentum = k->vec3();
    s.done();
  }
  const Node ees = o.get("endeffectors");
  ees.require_array();
  if (ees.size() == 0) ees.fail("at least one endeffector is required");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < ees.size(); ++i) {
    Object eo(ees.index(i));
    model::EndeffectorConfig ee;
    const Node id = eo.get("id");
    ee.id = id.string();
    if (ee.id.empty()) id.fail("empty endeffector id");
    if (!ids.insert(ee.id).second) id.fail("duplicate endeffector id \"" + ee.id + "\"");
    ee.is_hand = eo.boolean("hand", false);
    if (auto c = eo.opt("cop_min")) ee.cop_min = c->vec2();
    if (auto c = eo.opt("cop_max")) {
      ee.cop_max = c->vec2();
      if (!(ee.cop_min.array() <= ee.cop_max.array()).all()) c->fail("cop_max below cop_min");
    }
    ee.max_reach = eo.positive("max_reach", ee.max_reach);
    eo.done();
    spec.endeffectors.push_back(ee);
  }
  o.done();
}

void parse_schedule(Object o, Scenario& sc) {
  auto& spec = sc.spec;
  const double dt = o.get("dt").positive();
  const auto horizon = o.opt("horizon");
  const auto duration = o.opt("duration");
  if (horizon && duration) duration->fail("give either horizon or duration, not both");
  if (!horizon && !duration) o.node().fail("missing required key \"horizon\" or \"duration\"");
  int N = 0;
  if (horizon) {
    N = horizon->integer_at_least(1);
  } else {
    N = static_cast<int>(std::lround(duration->positive() / dt));
    if (N < 1) duration->fail("duration shorter than half a timestep");
  }
  spec.dt_init = dt;
  spec.dt_min = dt;
  spec.dt_max = dt;
  if (auto n = o.opt("dt_min")) {
    spec.dt_min = n->positive();
    if (spec.dt_min > dt) n->fail("dt_min exceeds dt");
  }
  if (auto n = o.opt("dt_max")) {
    spec.dt_max = n->positive();
    if (spec.dt_max < dt) n->fail("dt_max below dt");
  }

  const Node phases = o.get("phases");
  phases.require_array();
  std::vector<model::ContactPhase> out;
  const int nsurf = static_cast<int>(spec.surfaces.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const Node pn = phases.index(i);
    Object po(pn);
    model::ContactPhase ph;
    ph.endeffector = endeffector_index(po.get("endeffector"), spec.endeffectors);
    const auto steps = po.opt("steps");
    const auto start = po.opt("start");
    const auto end = po.opt("end");
    if (steps) {
      if (start || end) steps->fail("give either steps or start/end, not both");
      steps->require_array(2);
      ph.first = steps->index(0).integer_at_least(1);
      ph.last = steps->index(1).integer_at_least(ph.first);
      if (ph.last > N) steps->fail("phase ends after the horizon");
    } else {
      if (!start || !end) pn.fail("a phase needs steps or both start and end");
      const double t0 = start->nonnegative();
      const double t1 = end->number();
      if (!(t1 > t0)) end->fail("end must be after start");
      // Step t spans [(t-1) dt, t dt]; it belongs to the phase when its midpoint does.
      const double tol = 1e-9 * dt;
      ph.first = static_cast<int>(std::ceil((t0 - tol) / dt + 0.5));
      ph.last = static_cast<int>(std::floor((t1 + tol) / dt + 0.5));
      ph.first = std::max(ph.first, 1);
      ph.last = std::min(ph.last, N);
      if (ph.first > ph.last) pn.fail("phase covers no control step");
    }
    if (auto s = po.opt("surface")) {
      ph.surface = s->integer_at_least(0);
      if (ph.surface >= nsurf) s->fail("no surface with index " + std::to_string(ph.surface));
    } else if (nsurf == 0) {
      pn.fail("a phase without a surface needs a terrain to plan on");
    }
    if (auto p = po.opt("position")) ph.position = p->vec3();
    ph.yaw = po.number("yaw", 0.0);
    po.done();
    out.push_back(ph);
  }
  o.done();
  try {
    spec.schedule = model::ContactSchedule(N, spec.num_endeffectors(), std::move(out));
  } catch (const std::invalid_argument& e) {
    phases.fail(e.what());
  }
}

void parse_costs(Object o, model::CostWeights& w) {
  w.com_terminal = o.nonnegative("com_terminal", w.com_terminal);
  w.time_regularization = o.nonnegative("time_regularization", w.time_regularization);
  w.momenta_terminal = o.nonnegative("momenta_terminal", w.momenta_terminal);
  w.endeffector_consensus = o.nonnegative("endeffector_consensus", w.endeffector_consensus);
  w.momenta_consensus = o.nonnegative("momenta_consensus", w.momenta_consensus);
  w.momenta_rate = o.nonnegative("momenta_rate", w.momenta_rate);
  w.momenta_running = o.nonnegative("momenta_running", w.momenta_running);
  w.force = o.nonnegative("force", w.force);
  w.torque = o.nonnegative("torque", w.torque);
  o.done();
}

json costs_json(const model::CostWeights& w) {
  return {{"com_terminal", w.com_terminal},
          {"time_regularization", w.time_regularization},
          {"momenta_terminal", w.momenta_terminal},
          {"endeffector_consensus", w.endeffector_consensus},
          {"momenta_consensus", w.momenta_consensus},
          {"momenta_rate", w.momenta_rate},
          {"momenta_running", w.momenta_running},
          {"force", w.force},
          {"torque", w.torque}};
}

std::vector<model::Vec3> parse_series(const Node& n, int N) {
  n.require_array(static_cast<std::size_t>(N));
  std::vector<model::Vec3> out;
  for (int t = 0; t < N; ++t) out.push_back(n.index(t).vec3());
  return out;
}

json series_json(const std::vector<model::Vec3>& s) {
  json a = json::array();
  for (const auto& v : s) a.push_back(vec_json(v));
  return a;
}

void parse_references(Object o, model::ProblemSpec& spec) {
  auto& r = spec.references;
  const int N = spec.horizon();
  if (auto n = o.opt("com_target")) r.com_target = n->vec3();
  if (auto n = o.opt("lin_momentum_target")) r.lin_momentum_target = n->vec3();
  if (auto n = o.opt("ang_momentum_target")) r.ang_momentum_target = n->vec3();
  if (auto n = o.opt("lin_momentum")) r.lin_momentum = parse_series(*n, N);
  if (auto n = o.opt("ang_momentum")) r.ang_momentum = parse_series(*n, N);
  if (auto n = o.opt("endeffector_positions")) {
    Object eo(*n);
    r.endeffector_positions.assign(spec.endeffectors.size(), {});
    for (std::size_t e = 0; e < spec.endeffectors.size(); ++e)
      if (auto s = eo.opt(spec.endeffectors[e].id)) r.endeffector_positions[e] = parse_series(*s, N);
    eo.done();
  }
  o.done();
}

json references_json(const model::ProblemSpec& spec) {
  const auto& r = spec.references;
  json j = {{"lin_momentum_target", vec_json(r.lin_momentum_target)},
            {"ang_momentum_target", vec_json(r.ang_momentum_target)}};
  if (r.com_target) j["com_target"] = vec_json(*r.com_target);
  if (!r.lin_momentum.empty()) j["lin_momentum"] = series_json(r.lin_momentum);
  if (!r.ang_momentum.empty()) j["ang_momentum"] = series_json(r.ang_momentum);
  json ee = json::object();
  for (std::size_t e = 0; e < r.endeffector_positions.size(); ++e)
    if (!r.endeffector_positions[e].empty())
      ee[spec.endeffectors[e].id] = series_json(r.endeffector_positions[e]);
  if (!ee.empty()) j["endeffector_positions"] = ee;
  return j;
}

void parse_torque_limits(Object o, model::ProblemSpec& spec) {
  const int N = spec.horizon();
  const int ne = spec.num_endeffectors();
  model::TorqueLimitData d;
  const Node lo = o.get("tau_min");
  lo.require_array();
  const auto nj = lo.size();
  if (nj == 0) lo.fail("at least one joint is required");
  d.tau_min.resize(static_cast<Eigen::Index>(nj));
  d.tau_max.resize(static_cast<Eigen::Index>(nj));
  for (std::size_t j = 0; j < nj; ++j) d.tau_min[static_cast<Eigen::Index>(j)] = lo.index(j).bound(-kInf);
  const Node hi = o.get("tau_max");
  hi.require_array(nj);
  for (std::size_t j = 0; j < nj; ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    d.tau_max[i] = hi.index(j).bound(kInf);
    if (d.tau_max[i] < d.tau_min[i]) hi.index(j).fail("tau_max below tau_min");
  }
  const int n = static_cast<int>(nj);

  d.offset.assign(N, Eigen::VectorXd::Zero(n));
  if (auto off = o.opt("offset")) {
    if (is_matrix_of_rows(off->value())) {
      off->require_array(static_cast<std::size_t>(N));
      for (int t = 0; t < N; ++t) d.offset[t] = off->index(t).vector(nj);
    } else {
      const Eigen::VectorXd v = off->vector(nj);
      std::fill(d.offset.begin(), d.offset.end(), v);
    }
  }
  d.maps.assign(N, std::vector<Eigen::MatrixXd>(ne));
  if (auto maps = o.opt("maps")) {
    Object mo(*maps);
    for (int e = 0; e < ne; ++e) {
      auto m = mo.opt(spec.endeffectors[e].id);
      if (!m) continue;
      m->require_array();
      // Constant map: n_j rows of 6; per step: N entries of (null or n_j rows of 6).
      const bool per_step = m->size() > 0 && (m->value().front().is_null() ||
                                              is_matrix_of_rows(m->value().front()));
      if (per_step) {
        m->require_array(static_cast<std::size_t>(N));
        for (int t = 0; t < N; ++t) {
          const Node mt = m->index(t);
          if (!mt.value().is_null()) d.maps[t][e] = parse_matrix(mt, n, 6);
        }
      } else {
        const Eigen::MatrixXd D = parse_matrix(*m, n, 6);
        for (int t = 0; t < N; ++t) d.maps[t][e] = D;
      }
    }
    mo.done();
  }
  o.done();
  spec.torque_limits = std::move(d);
}

json torque_limits_json(const model::ProblemSpec& spec) {
  const auto& d = *spec.torque_limits;
  json j = {{"tau_min", bound_json(d.tau_min)}, {"tau_max", bound_json(d.tau_max)}};
  const bool const_offset =
      std::all_of(d.offset.begin(), d.offset.end(), [&](const Eigen::VectorXd& v) { return v == d.offset.front(); });
  if (const_offset && !d.offset.empty()) {
    j["offset"] = vec_json(d.offset.front());
  } else {
    json a = json::array();
    for (const auto& v : d.offset) a.push_back(vec_json(v));
    j["offset"] = a;
  }
  json maps = json::object();
  for (int e = 0; e < spec.num_endeffectors(); ++e) {
    bool any = false, constant = true;
    for (const auto& step : d.maps) {
      const auto& D = step[e];
      any = any || D.size() > 0;
      const auto& D0 = d.maps.front()[e];
      constant = constant && D.size() == D0.size() && (D.size() == 0 || D == D0);
    }
    if (!any) continue;
    if (constant) {
      maps[spec.endeffectors[e].id] = matrix_json(d.maps.front()[e]);
    } else {
      json a = json::array();
      for (const auto& step : d.maps) a.push_back(step[e].size() == 0 ? json(nullptr) : matrix_json(step[e]));
      maps[spec.endeffectors[e].id] = a;
    }
  }
  j["maps"] = maps;
  return j;
}

mip::ReachSettings parse_reach(Object o) {
  mip::ReachSettings r;
  if (auto n = o.opt("step_min")) r.step_min = n->vec3();
  if (auto n = o.opt("step_max")) {
    r.step_max = n->vec3();
    if (!(r.step_min.array() <= r.step_max.array()).all()) n->fail("step_max below step_min");
  }
  if (auto n = o.opt("focus1")) r.focus1 = n->vec2();
  if (auto n = o.opt("focus2")) r.focus2 = n->vec2();
  r.radius1 = o.positive("radius1", r.radius1);
  r.radius2 = o.positive("radius2", r.radius2);
  o.done();
  return r;
}

json reach_json(const mip::ReachSettings& r) {
  return {{"step_min", vec_json(r.step_min)}, {"step_max", vec_json(r.step_max)}, {"focus1", vec_json(r.focus1)},
          {"focus2", vec_json(r.focus2)},     {"radius1", r.radius1},              {"radius2", r.radius2}};
}

void parse_solver(Object o, conic::SolverSettings& s) {
  s.tol = o.positive("tol", s.tol);
  s.max_iters = o.integer_at_least("max_iters", 1, s.max_iters);
  s.static_reg = o.positive("static_reg", s.static_reg);
  s.refine_steps = o.integer_at_least("refine_steps", 0, s.refine_steps);
  if (auto n = o.opt("step_fraction")) {
    s.step_fraction = n->positive();
    if (s.step_fraction >= 1.0) n->fail("step_fraction must be below 1");
  }
  s.equilibration_passes = o.integer_at_least("equilibration_passes", 0, s.equilibration_passes);
  o.done();
}

json solver_json(const conic::SolverSettings& s) {
  return {{"tol", s.tol},
          {"max_iters", s.max_iters},
          {"static_reg", s.static_reg},
          {"refine_steps", s.refine_steps},
          {"step_fraction", s.step_fraction},
          {"equilibration_passes", s.equilibration_passes}};
}

void parse_mip(Object o, mip::MipSettings& m, int num_ee) {
  m.gap_tol = o.positive("gap_tol", m.gap_tol);
  m.node_limit = o.integer_at_least("node_limit", 1, m.node_limit);
  m.iters_per_node = o.integer_at_least("iters_per_node", 1, m.iters_per_node);
  if (auto n = o.opt("relax")) m.relaxation = parse_relax(*n);
  m.rho0 = o.positive("rho0", m.rho0);
  m.nu = o.positive("nu", m.nu);
  m.soft_penalty = o.positive("eta", m.soft_penalty);
  m.slack_weight = o.nonnegative("slack_weight", m.slack_weight);
  m.anchored_slack_weight = o.nonnegative("anchored_slack_weight", m.anchored_slack_weight);
  m.force_limit = o.positive("force_limit", m.force_limit);
  m.box_margin = o.nonnegative("box_margin", m.box_margin);
  m.rotated_reach = o.boolean("rotated_reach", m.rotated_reach);
  m.yaw_segments = o.integer_at_least("yaw_segments", 1, m.yaw_segments);
  m.yaw_min = o.number("yaw_min", m.yaw_min);
  if (auto n = o.opt("yaw_max")) {
    m.yaw_max = n->number();
    if (!(m.yaw_max > m.yaw_min)) n->fail("yaw_max must exceed yaw_min");
  }
  m.max_yaw_step = o.positive("max_yaw_step", m.max_yaw_step);
  m.threads = o.integer_at_least("threads", 0, m.threads);
  if (auto n = o.opt("reach")) {
    n->require_array();
    if (n->size() != 1 && n->size() != static_cast<std::size_t>(num_ee))
      n->fail("give one reach entry or one per endeffector");
    m.reach.clear();
    for (std::size_t i = 0; i < n->size(); ++i) m.reach.push_back(parse_reach(Object(n->index(i))));
  }
  o.done();
}

json mip_json(const mip::MipSettings& m) {
  json reach = json::array();
  for (const auto& r : m.reach) reach.push_back(reach_json(r));
  if (reach.empty()) reach.push_back(reach_json(mip::ReachSettings{}));
  return {{"gap_tol", m.gap_tol},
          {"node_limit", m.node_limit},
          {"iters_per_node", m.iters_per_node},
          {"relax", relax_name(m.relaxation)},
          {"rho0", m.rho0},
          {"nu", m.nu},
          {"eta", m.soft_penalty},
          {"slack_weight", m.slack_weight},
          {"anchored_slack_weight", m.anchored_slack_weight},
          {"force_limit", m.force_limit},
          {"box_margin", m.box_margin},
          {"rotated_reach", m.rotated_reach},
          {"yaw_segments", m.yaw_segments},
          {"yaw_min", m.yaw_min},
          {"yaw_max", m.yaw_max},
          {"max_yaw_step", m.max_yaw_step},
          {"threads", m.threads},
          {"reach", reach}};
}

void parse_settings(Object o, Scenario& sc) {
  auto& s = sc.scp;
  if (auto n = o.opt("mode")) {
    try {
      sc.mode = parse_mode(n->string());
    } catch (const std::invalid_argument& e) {
      n->fail(e.what());
    }
  }
  if (auto n = o.opt("relax")) s.relaxation = parse_relax(*n);
  s.eps_tol = o.positive("tol", s.eps_tol);
  s.eps_stall_tol = o.nonnegative("stall_tol", s.eps_stall_tol);
  s.max_outer_iters = o.integer_at_least("max_iters", 1, s.max_outer_iters);
  s.warm_start = o.boolean("warm_start", s.warm_start);
  s.rho0 = o.positive("rho0", s.rho0);
  if (auto n = o.opt("nu")) {
    s.nu = n->positive();
    if (s.nu >= 1.0) n->fail("nu must be below 1");
  }
  s.soft_penalty = o.positive("eta", s.soft_penalty);
  s.slack_weight = o.nonnegative("slack_weight", s.slack_weight);
  s.anchored_slack_weight = o.nonnegative("anchored_slack_weight", s.anchored_slack_weight);
  s.nominal_anchor = o.boolean("nominal_anchor", s.nominal_anchor);
  s.torque_limits = o.boolean("torque_limits", s.torque_limits);
  if (auto n = o.opt("solver")) parse_solver(Object(*n), s.solver);
  sc.mip.solver = s.solver;
  if (auto n = o.opt("mip")) parse_mip(Object(*n), sc.mip, sc.spec.num_endeffectors());
  o.done();
}

json settings_json(const Scenario& sc) {
  const auto& s = sc.scp;
  return {{"mode", std::string(to_string(sc.mode))},
          {"relax", relax_name(s.relaxation)},
          {"tol", s.eps_tol},
          {"stall_tol", s.eps_stall_tol},
          {"max_iters", s.max_outer_iters},
          {"warm_start", s.warm_start},
          {"rho0", s.rho0},
          {"nu", s.nu},
          {"eta", s.soft_penalty},
          {"slack_weight", s.slack_weight},
          {"anchored_slack_weight", s.anchored_slack_weight},
          {"nominal_anchor", s.nominal_anchor},
          {"torque_limits", s.torque_limits},
          {"solver", solver_json(s.solver)},
          {"mip", mip_json(sc.mip)}};
}

void dump_value(const json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& item : j.items()) {  // std::map order: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += pad + json(item.key()).dump() + ": ";
        dump_value(item.value(), indent + 2, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& v) { return v.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_value(j[i], indent, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_value(j[i], indent + 2, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? util::format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Momentum: return "momentum";
    case Mode::Time: return "time";
    case Mode::Contacts: return "contacts";
    case Mode::TimeContacts: return "time+contacts";
  }
  return "momentum";
}

Mode parse_mode(std::string_view s) {
  if (s == "momentum") return Mode::Momentum;
  if (s == "time") return Mode::Time;
  if (s == "contacts") return Mode::Contacts;
  if (s == "time+contacts") return Mode::TimeContacts;
  throw std::invalid_argument("unknown mode \"" + std::string(s) + "\" (momentum, time, contacts, time+contacts)");
}

void apply_mode(scp::ScpSettings& settings, Mode m) {
  settings.optimize_time = m == Mode::Time || m == Mode::TimeContacts;
  settings.optimize_contacts = m == Mode::Contacts || m == Mode::TimeContacts;
}

bool Scenario::has_planned_contacts() const {
  const auto& ph = spec.schedule.phases();
  return std::any_of(ph.begin(), ph.end(), [](const model::ContactPhase& p) { return p.surface < 0; });
}

std::vector<model::TerrainSurface> parse_terrain(const json& doc, const std::string& pointer) {
  const Node n(doc, pointer);
  n.require_array();
  std::vector<model::TerrainSurface> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(parse_surface(n.index(i)));
  return out;
}

json terrain_to_json(const std::vector<model::TerrainSurface>& surfaces) {
  json a = json::array();
  for (const auto& s : surfaces) a.push_back(surface_json(s));
  return a;
}

Scenario parse_scenario(const json& doc) {
  const Node root(doc, "");
  Object o(root);
  Scenario sc;
  sc.name = o.string("name", "");
  sc.description = o.string("description", "");
  parse_robot(Object(o.get("robot")), sc);
  if (auto t = o.opt("terrain")) {
    Object to(*t);
    sc.spec.surfaces = parse_terrain(to.get("surfaces").value(), t->ptr() + "/surfaces");
    to.done();
  }
  parse_schedule(Object(o.get("schedule")), sc);
  if (auto c = o.opt("costs")) parse_costs(Object(*c), sc.spec.weights);
  if (auto s = o.opt("settings")) {
    parse_settings(Object(*s), sc);
  } else {
    sc.mip.solver = sc.scp.solver;
  }
  if (auto r = o.opt("references")) parse_references(Object(*r), sc.spec);
  if (auto t = o.opt("torque_limits")) parse_torque_limits(Object(*t), sc.spec);
  o.done();
  if (sc.scp.torque_limits && !sc.spec.torque_limits)
    throw ScenarioError("/settings/torque_limits", "torque limits enabled without a torque_limits section");
  apply_mode(sc.scp, sc.mode);

  // Planned phases are checked against the first surface; the planner fills in the rest.
  model::ProblemSpec probe = sc.spec;
  for (auto& ph : probe.schedule.phases())
    if (ph.surface < 0) ph.surface = 0;
  probe.schedule = model::ContactSchedule(probe.horizon(), probe.num_endeffectors(), probe.schedule.phases());
  try {
    probe.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("", e.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_json(path)); }

json scenario_to_json(const Scenario& sc) {
  const auto& spec = sc.spec;
  json ees = json::array();
  for (const auto& ee : spec.endeffectors)
    ees.push_back({{"id", ee.id},
                   {"hand", ee.is_hand},
                   {"cop_min", vec_json(ee.cop_min)},
                   {"cop_max", vec_json(ee.cop_max)},
                   {"max_reach", ee.max_reach}});
  json robot = {{"mass", spec.mass},
                {"gravity", vec_json(spec.gravity)},
                {"initial_state",
                 {{"com", vec_json(spec.initial_state.com)},
                  {"lin_momentum", vec_json(spec.initial_state.lin_momentum)},
                  {"ang_momentum", vec_json(spec.initial_state.ang_momentum)}}},
                {"endeffectors", ees}};
  json phases = json::array();
  for (const auto& ph : spec.schedule.phases()) {
    json p = {{"endeffector", spec.endeffectors[ph.endeffector].id},
              {"steps", {ph.first, ph.last}},
              {"position", vec_json(ph.position)},
              {"yaw", ph.yaw}};
    if (ph.surface >= 0) p["surface"] = ph.surface;
    phases.push_back(p);
  }
  json schedule = {{"horizon", spec.horizon()},
                   {"dt", spec.dt_init},
                   {"dt_min", spec.dt_min},
                   {"dt_max", spec.dt_max},
                   {"phases", phases}};
  json j = {{"name", sc.name},
            {"description", sc.description},
            {"robot", robot},
            {"terrain", {{"surfaces", terrain_to_json(spec.surfaces)}}},
            {"schedule", schedule},
            {"costs", costs_json(spec.weights)},
            {"settings", settings_json(sc)},
            {"references", references_json(spec)}};
  if (spec.torque_limits) j["torque_limits"] = torque_limits_json(spec);
  return j;
}

std::string canonical_dump(const json& doc) {
  std::string out;
  dump_value(doc, 0, out);
  out += "\n";
  return out;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

model::ProblemSpec resample_horizon(const model::ProblemSpec& spec, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  const int N = spec.horizon();
  const double ratio = static_cast<double>(N) / horizon;
  model::ProblemSpec out = spec;
  out.dt_init = spec.dt_init * ratio;
  out.dt_min = spec.dt_min * ratio;
  out.dt_max = spec.dt_max * ratio;
  // Old step containing the midpoint of new step t.
  auto source = [&](int t) { return std::clamp(static_cast<int>(std::floor((t - 0.5) * ratio)) + 1, 1, N); };

  std::vector<model::ContactPhase> phases;
  for (const auto& ph : spec.schedule.phases()) {
    model::ContactPhase p = ph;
    p.first = static_cast<int>(std::ceil((ph.first - 1) / ratio + 0.5 - 1e-9));
    p.last = static_cast<int>(std::floor(ph.last / ratio + 0.5 + 1e-9));
    p.first = std::max(p.first, 1);
    p.last = std::min(p.last, horizon);
    if (p.first <= p.last) phases.push_back(p);
  }
  out.schedule = model::ContactSchedule(horizon, spec.num_endeffectors(), std::move(phases));

  auto resample = [&](const auto& series) {
    std::decay_t<decltype(series)> r;
    if (series.empty()) return r;
    for (int t = 1; t <= horizon; ++t) r.push_back(series[source(t) - 1]);
    return r;
  };
  out.references.lin_momentum = resample(spec.references.lin_momentum);
  out.references.ang_momentum = resample(spec.references.ang_momentum);
  for (auto& s : out.references.endeffector_positions) s = resample(s);
  if (spec.torque_limits) {
    out.torque_limits->offset = resample(spec.torque_limits->offset);
    out.torque_limits->maps = resample(spec.torque_limits->maps);
  }
  return out;
}

}  // namespace cscp::io
