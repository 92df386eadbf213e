#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cscp/io/plan_json.hpp"
#include "cscp/io/scenario.hpp"
#include "cscp/io/trajectory_csv.hpp"
#include "fixtures.hpp"

namespace cscp::io {
namespace {

using nlohmann::json;

const char* const kScenarios[] = {"static_stand",         "flat_walk",           "tilted_stairs_mu035",
                                  "tilted_stairs_mu025",  "hand_assisted_stairs", "gallop",
                                  "asymmetric_walk",      "stepping_stones",      "torque_redistribution"};

json load(const std::string& name) { return read_json(testing::scenario_path(name)); }

std::string pointer_of(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ScenarioError& e) {
    return e.pointer();
  }
  return "<accepted>";
}

class Bundled : public ::testing::TestWithParam<const char*> {};

TEST_P(Bundled, CanonicalFormIsAFixedPoint) {
  const Scenario s = load_scenario(testing::scenario_path(GetParam()));
  const std::string once = canonical_dump(scenario_to_json(s));
  const std::string twice = canonical_dump(scenario_to_json(parse_scenario(json::parse(once))));
  EXPECT_EQ(once, twice);
  ASSERT_FALSE(once.empty());
  EXPECT_EQ(once.back(), '\n');
}

TEST_P(Bundled, ParsedSpecValidates) {
  const Scenario s = load_scenario(testing::scenario_path(GetParam()));
  // Planned contacts only get surfaces from the contact planner.
  if (s.has_planned_contacts())
    EXPECT_EQ(std::string(GetParam()), "stepping_stones");
  else
    EXPECT_NO_THROW(s.spec.validate());
  EXPECT_EQ(s.name, GetParam());
}

INSTANTIATE_TEST_SUITE_P(Scenarios, Bundled, ::testing::ValuesIn(kScenarios));

TEST(Scenario, UnknownKeyIsLocated) {
  auto doc = load("static_stand");
  doc["robot"]["colour"] = "red";
  EXPECT_EQ(pointer_of(doc), "/robot/colour");
  doc = load("static_stand");
  doc["schedule"]["phases"][2]["surfce"] = 0;
  EXPECT_EQ(pointer_of(doc), "/schedule/phases/2/surfce");
}

TEST(Scenario, WrongTypeIsLocated) {
  auto doc = load("static_stand");
  doc["robot"]["mass"] = "heavy";
  EXPECT_EQ(pointer_of(doc), "/robot/mass");
  doc = load("static_stand");
  doc["robot"]["initial_state"]["com"] = json::array({0.0, 1.0});
  EXPECT_EQ(pointer_of(doc), "/robot/initial_state/com");
  doc = load("flat_walk");
  doc["terrain"]["surfaces"][0]["friction"] = -0.5;
  EXPECT_EQ(pointer_of(doc), "/terrain/surfaces/0/friction");
}

TEST(Scenario, BadModeIsLocated) {
  auto doc = load("static_stand");
  doc["settings"]["mode"] = "fast";
  EXPECT_EQ(pointer_of(doc), "/settings/mode");
  EXPECT_THROW(parse_mode("fast"), std::invalid_argument);
  for (Mode m : {Mode::Momentum, Mode::Time, Mode::Contacts, Mode::TimeContacts})
    EXPECT_EQ(parse_mode(to_string(m)), m);
}

// A missing key is reported at the object that should hold it.
TEST(Scenario, MissingRequiredSectionIsLocated) {
  auto doc = load("static_stand");
  doc.erase("robot");
  EXPECT_EQ(pointer_of(doc), "");
  doc = load("static_stand");
  doc["robot"].erase("mass");
  EXPECT_EQ(pointer_of(doc), "/robot");
  try {
    parse_scenario(doc);
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("mass"), std::string::npos) << e.what();
  }
}

TEST(Scenario, ModeFlagsReachTheSettings) {
  scp::ScpSettings st;
  apply_mode(st, Mode::TimeContacts);
  EXPECT_TRUE(st.optimize_time);
  EXPECT_TRUE(st.optimize_contacts);
  apply_mode(st, Mode::Momentum);
  EXPECT_FALSE(st.optimize_time);
  EXPECT_FALSE(st.optimize_contacts);
}

TEST(Terrain, RoundTrip) {
  const std::vector<model::TerrainSurface> surfaces = {testing::square(0, 0, 0, 0.3, 0.6),
                                                       testing::square(1, 0.5, 0.1, 0.2, 0.4)};
  const auto back = parse_terrain(terrain_to_json(surfaces));
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].friction(), surfaces[i].friction());
    EXPECT_EQ(back[i].corners(), surfaces[i].corners());
  }
  json bad = terrain_to_json(surfaces);
  bad[1]["corners"][0] = "x";
  try {
    parse_terrain(bad, "/terrain");
    FAIL() << "accepted a malformed corner";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.pointer(), "/terrain/1/corners/0");
  }
}

model::Trajectory random_trajectory(const model::ProblemSpec& spec, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, 3.0);
  auto v3 = [&] { return model::Vec3(n(rng), n(rng), n(rng)); };
  auto tr = model::make_controls(spec);
  for (auto& s : tr.states) s = {v3(), v3(), v3()};
  for (auto& dt : tr.timesteps) dt = 0.05 + std::abs(n(rng)) * 1e-3;
  for (auto& row : tr.samples)
    for (auto& s : row) {
      if (!s.active) continue;
      s.position = v3();
      s.wrench.force = v3() * 1e3;
      s.wrench.cop = model::Vec2(n(rng) * 1e-2, n(rng) / 7.0);
      s.wrench.normal_torque = n(rng) / 3.0;
    }
  return tr;
}

TEST(Csv, RoundTripIsExact) {
  auto spec = testing::static_stand(6);
  auto phases = spec.schedule.phases();
  phases[2].last = 3;
  spec.schedule = model::ContactSchedule(6, 4, phases);
  const auto tr = random_trajectory(spec, 3);
  const auto back = parse_trajectory_csv(trajectory_to_csv(tr, spec), spec);
  ASSERT_EQ(back.horizon(), 6);
  for (int t = 0; t <= 6; ++t) {
    EXPECT_EQ(back.states[t].com, tr.states[t].com);
    EXPECT_EQ(back.states[t].lin_momentum, tr.states[t].lin_momentum);
    EXPECT_EQ(back.states[t].ang_momentum, tr.states[t].ang_momentum);
  }
  for (int t = 1; t <= 6; ++t) {
    EXPECT_EQ(back.timesteps[t - 1], tr.timesteps[t - 1]);
    for (int e = 0; e < 4; ++e) {
      const auto& a = tr.samples[t - 1][e];
      const auto& b = back.samples[t - 1][e];
      EXPECT_EQ(a.active, b.active);
      if (!a.active) continue;
      EXPECT_EQ(a.position, b.position);
      EXPECT_EQ(a.wrench.force, b.wrench.force);
      EXPECT_EQ(a.wrench.cop, b.wrench.cop);
      EXPECT_EQ(a.wrench.normal_torque, b.wrench.normal_torque);
    }
  }
  EXPECT_EQ(trajectory_to_csv(back, spec), trajectory_to_csv(tr, spec));
}

TEST(Csv, HeaderNamesEveryColumn) {
  const auto spec = testing::single_contact(2);
  const std::string csv = trajectory_to_csv(model::make_controls(spec), spec);
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header,
            "t,dt,com_x,com_y,com_z,l_x,l_y,l_z,k_x,k_y,k_z,foot_active,foot_px,foot_py,foot_pz,foot_fx,foot_fy,"
            "foot_fz,foot_cop_x,foot_cop_y,foot_lambda");
}

TEST(Csv, RejectsForeignHeaderAndBadNumbers) {
  const auto spec = testing::single_contact(2);
  std::string csv = trajectory_to_csv(model::make_controls(spec), spec);
  const auto other = testing::static_stand(2);
  EXPECT_THROW(parse_trajectory_csv(csv, other), std::invalid_argument);
  std::string broken = csv;
  broken.replace(broken.rfind(",0"), 2, ",zz");
  EXPECT_THROW(parse_trajectory_csv(broken, spec), std::invalid_argument);
  EXPECT_THROW(parse_trajectory_csv("", spec), std::invalid_argument);
}

TEST(Resample, KeepsDurationAndPhaseTimes) {
  const Scenario s = load_scenario(testing::scenario_path("flat_walk"));
  const auto& spec = s.spec;
  const int N = spec.horizon();
  const double T = N * spec.dt_init;
  for (int M : {N / 2, 2 * N, 5 * N}) {
    const auto r = resample_horizon(spec, M);
    ASSERT_EQ(r.horizon(), M);
    EXPECT_NEAR(M * r.dt_init, T, 1e-12);
    EXPECT_NEAR(r.dt_min / r.dt_init, spec.dt_min / spec.dt_init, 1e-12);
    EXPECT_NO_THROW(r.validate());
    // A step of the new grid is active iff its midpoint falls in an active original step.
    for (int e = 0; e < spec.num_endeffectors(); ++e)
      for (int t = 1; t <= M; ++t) {
        const double mid = (t - 0.5) * r.dt_init;
        const int orig = std::min(N, static_cast<int>(std::floor(mid / spec.dt_init)) + 1);
        EXPECT_EQ(r.schedule.active(e, t), spec.schedule.active(e, orig)) << "e " << e << " t " << t;
      }
  }
  const auto same = resample_horizon(spec, N);
  EXPECT_EQ(canonical_dump(scenario_to_json({s.name, s.description, s.mode, same, s.scp, s.mip})),
            canonical_dump(scenario_to_json(s)));
}

TEST(PlanJson, ReportsAssignmentsAndBounds) {
  model::ProblemSpec spec = testing::single_contact(4);
  auto phases = spec.schedule.phases();
  phases[0].last = 2;
  phases.push_back({0, 3, 4, -1, model::Vec3::Zero(), 0.0});
  spec.schedule = model::ContactSchedule(4, 1, phases);
  mip::MipResult r;
  r.status = mip::MipStatus::Optimal;
  r.has_incumbent = true;
  r.objective = 2.5;
  r.lower_bound = 2.5;
  r.gap = 0.0;
  r.nodes = 3;
  r.assignment.planned = {1};
  r.assignment.H = Eigen::MatrixXi::Ones(1, 1);
  r.assignment.surface = {0, 0};
  r.assignment.positions = {model::Vec3::Zero(), model::Vec3(0.1, 0.2, 0)};
  r.assignment.yaw = {0.0, 0.3};
  r.bounds = {{1.0, std::numeric_limits<double>::infinity(), 1}, {2.5, 2.5, 3}};
  const json j = plan_to_json(r, spec);
  EXPECT_EQ(j["status"], "optimal");
  EXPECT_EQ(j["assignments"], json::array({json::array({0, 0})}));
  ASSERT_EQ(j["footsteps"].size(), 2u);
  EXPECT_EQ(j["footsteps"][1]["planned"], true);
  EXPECT_EQ(j["footsteps"][1]["position"][1], 0.2);
  EXPECT_TRUE(j["bounds"][0]["ub"].is_null());
  EXPECT_EQ(j["bounds"][1]["nodes"], 3);
}

}  // namespace
}  // namespace cscp::io
