#include "fixtures.hpp"

namespace cscp::testing {

model::TerrainSurface square(double cx, double cy, double z, double h, double friction) {
  return model::TerrainSurface(
      {{cx - h, cy - h, z}, {cx + h, cy - h, z}, {cx + h, cy + h, z}, {cx - h, cy + h, z}}, friction);
}

model::ProblemSpec static_stand(int N) {
  model::ProblemSpec s;
  s.mass = 20.0;
  s.friction = 0.7;
  s.surfaces = {square(0, 0, 0, 1.0)};
  const char* ids[] = {"lf", "rf", "lh", "rh"};
  const double xy[4][2] = {{0.25, 0.15}, {0.25, -0.15}, {-0.25, 0.15}, {-0.25, -0.15}};
  std::vector<model::ContactPhase> phases;
  for (int e = 0; e < 4; ++e) {
    model::EndeffectorConfig c;
    c.id = ids[e];
    c.cop_min = model::Vec2(-0.02, -0.02);
    c.cop_max = model::Vec2(0.02, 0.02);
    c.max_reach = 0.8;
    s.endeffectors.push_back(c);
    model::ContactPhase ph;
    ph.endeffector = e;
    ph.first = 1;
    ph.last = N;
    ph.surface = 0;
    ph.position = model::Vec3(xy[e][0], xy[e][1], 0.0);
    phases.push_back(ph);
  }
  s.schedule = model::ContactSchedule(N, 4, phases);
  s.dt_init = s.dt_min = s.dt_max = 0.1;
  s.initial_state.com = model::Vec3(0.0, 0.0, 0.45);
  return s;
}

model::ProblemSpec single_contact(int N, double mass) {
  model::ProblemSpec s;
  s.mass = mass;
  s.surfaces = {square(0, 0, 0, 1.0)};
  model::EndeffectorConfig c;
  c.id = "foot";
  c.cop_min = model::Vec2(-0.05, -0.05);
  c.cop_max = model::Vec2(0.05, 0.05);
  c.max_reach = 1.0;
  s.endeffectors = {c};
  model::ContactPhase ph;
  ph.first = 1;
  ph.last = N;
  ph.surface = 0;
  s.schedule = model::ContactSchedule(N, 1, {ph});
  s.dt_init = s.dt_min = s.dt_max = 0.1;
  s.initial_state.com = model::Vec3(0.0, 0.0, 0.5);
  return s;
}

}  // namespace cscp::testing
