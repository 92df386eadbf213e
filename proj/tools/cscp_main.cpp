// Command-line driver: solve, plan, check, bench, canon.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cscp/io/plan_json.hpp"
#include "cscp/io/scenario.hpp"
#include "cscp/io/trajectory_csv.hpp"
#include "cscp/mip/bnb.hpp"
#include "cscp/model/feasibility.hpp"
#include "cscp/model/integrate.hpp"
#include "cscp/scp/report.hpp"
#include "cscp/scp/scp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInputError = 1, kNotConverged = 2, kInfeasible = 3 };

struct Common {
  std::string scenario;
  std::optional<std::string> mode;
  std::optional<std::string> relax;
  std::optional<double> tol;
  std::optional<int> max_iters;
  bool torque_limits = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> dump_dir;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("scenario", c.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--mode", c.mode, "momentum | time | contacts | time+contacts")
      ->check(CLI::IsMember({"momentum", "time", "contacts", "time+contacts"}));
  cmd->add_option("--relax", c.relax, "trust | soft")->check(CLI::IsMember({"trust", "soft"}));
  cmd->add_option("--tol", c.tol, "Convergence tolerance on eps")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", c.max_iters, "Outer iteration limit")->check(CLI::PositiveNumber);
  cmd->add_flag("--torque-limits", c.torque_limits, "Enforce the scenario's torque limits");
  cmd->add_option("--seed", c.seed, "Seed recorded in the report");
  cmd->add_option("--dump-problems", c.dump_dir, "Write every conic subproblem to DIR");
  cmd->add_option("--out", c.out_dir, "Output directory");
}

cscp::io::Scenario load(const Common& c) {
  auto sc = cscp::io::load_scenario(c.scenario);
  if (c.mode) sc.mode = cscp::io::parse_mode(*c.mode);
  cscp::io::apply_mode(sc.scp, sc.mode);
  if (c.relax) {
    const auto m = *c.relax == "trust" ? cscp::relax::Mode::TrustRegion : cscp::relax::Mode::SoftConstraint;
    sc.scp.relaxation = m;
    sc.mip.relaxation = m;
  }
  if (c.tol) sc.scp.eps_tol = *c.tol;
  if (c.max_iters) sc.scp.max_outer_iters = *c.max_iters;
  if (c.torque_limits) {
    if (!sc.spec.torque_limits) throw cscp::io::ScenarioError("/torque_limits", "--torque-limits needs this section");
    sc.scp.torque_limits = true;
  }
  if (c.dump_dir) sc.scp.dump_dir = fs::path(*c.dump_dir);
  return sc;
}

int scp_exit(cscp::scp::ScpStatus s) {
  switch (s) {
    case cscp::scp::ScpStatus::Converged: return kOk;
    case cscp::scp::ScpStatus::Infeasible: return kInfeasible;
    default: return kNotConverged;
  }
}

// Runs SCP and writes trajectory.csv and report.json when an output directory is given.
int run_scp(const cscp::io::Scenario& sc, const Common& c, const std::string& prefix) {
  const auto report = cscp::scp::solve_scp(sc.spec, sc.scp);
  json rj = cscp::scp::report_to_json(report, sc.spec.mass);
  rj["scenario"] = sc.name;
  rj["mode"] = std::string(cscp::io::to_string(sc.mode));
  if (c.seed) rj["seed"] = *c.seed;
  if (!report.trajectory.states.empty()) {
    const auto v = cscp::model::check_feasibility(report.trajectory, sc.spec);
    rj["violations"] = {{"friction", v.friction}, {"cop", v.cop}, {"timestep", v.timestep},
                        {"reach", v.reach},       {"membership", v.membership}, {"max", v.max()}};
  }
  if (c.out_dir) {
    const fs::path dir(*c.out_dir);
    rj["trajectory"] = prefix + "trajectory.csv";
    if (!report.trajectory.states.empty())
      cscp::io::write_trajectory_csv(dir / (prefix + "trajectory.csv"), report.trajectory, sc.spec);
    cscp::io::write_text(dir / (prefix + "report.json"), rj.dump(2) + "\n");
  }
  std::printf("%s: %s after %d iterations, eps %.3e, time %.3f s\n", sc.name.c_str(),
              std::string(cscp::scp::to_string(report.status)).c_str(), report.total_iterations(),
              report.iterations.empty() ? 0.0 : report.last().eps.eps, report.total_time);
  return scp_exit(report.status);
}

int cmd_solve(const Common& c) {
  const auto sc = load(c);
  if (sc.has_planned_contacts())
    throw cscp::io::ScenarioError("/schedule/phases", "phases without a surface need `cscp plan` first");
  return run_scp(sc, c, "");
}

int cmd_plan(const Common& c, const std::optional<std::string>& terrain, bool refine) {
  auto sc = load(c);
  if (terrain) {
    sc.spec.surfaces = cscp::io::parse_terrain(cscp::io::read_json(*terrain));
    for (const auto& ph : sc.spec.schedule.phases())
      if (ph.surface >= static_cast<int>(sc.spec.surfaces.size()))
        throw cscp::io::ScenarioError("/schedule/phases", "surface index beyond the supplied terrain");
  }
  const auto result = cscp::mip::plan_contacts(sc.spec, sc.mip);
  const json pj = cscp::io::plan_to_json(result, sc.spec);
  if (c.out_dir) {
    cscp::io::write_text(fs::path(*c.out_dir) / "plan.json", pj.dump(2) + "\n");
    if (result.has_incumbent)
      cscp::io::write_trajectory_csv(fs::path(*c.out_dir) / "plan_trajectory.csv", result.trajectory, sc.spec);
  }
  std::printf("%s: plan %s, objective %.6g, bound %.6g, gap %.2e, %d nodes\n", sc.name.c_str(),
              std::string(cscp::mip::to_string(result.status)).c_str(), result.objective, result.lower_bound,
              result.gap, result.nodes);
  if (result.status == cscp::mip::MipStatus::Infeasible) return kInfeasible;
  if (!refine) return result.status == cscp::mip::MipStatus::Optimal ? kOk : kNotConverged;
  cscp::io::Scenario refined = sc;
  refined.spec = cscp::mip::apply_assignment(sc.spec, result.assignment);
  const int code = run_scp(refined, c, "refined_");
  return code != kOk ? code : (result.status == cscp::mip::MipStatus::Optimal ? kOk : kNotConverged);
}

int cmd_check(const Common& c, const std::string& trajectory_path, double tol) {
  const auto sc = load(c);
  if (sc.has_planned_contacts())
    throw cscp::io::ScenarioError("/schedule/phases", "checking needs every phase assigned to a surface");
  cscp::model::Trajectory traj;
  try {
    traj = cscp::io::read_trajectory_csv(trajectory_path, sc.spec);
  } catch (const std::invalid_argument& e) {
    throw cscp::io::ScenarioError("", trajectory_path + ": " + e.what());
  }
  if (traj.horizon() != sc.spec.horizon())
    throw cscp::io::ScenarioError("", "trajectory horizon " + std::to_string(traj.horizon()) +
                                          " differs from the scenario's " + std::to_string(sc.spec.horizon()));
  // Activity must follow the schedule; contact points of active steps are taken from the file.
  for (int t = 1; t <= traj.horizon(); ++t)
    for (int e = 0; e < sc.spec.num_endeffectors(); ++e)
      if (traj.samples[t - 1][e].active != sc.spec.schedule.active(e, t))
        throw cscp::io::ScenarioError("", "activity of " + sc.spec.endeffectors[e].id + " at step " +
                                              std::to_string(t) + " contradicts the schedule");
  const auto v = cscp::model::check_feasibility(traj, sc.spec);
  const auto integrated = cscp::model::integrate(sc.spec, traj);
  const auto err = cscp::model::convergence_error(traj, integrated);
  const json j = {{"friction", v.friction},     {"cop", v.cop},         {"timestep", v.timestep},
                  {"reach", v.reach},           {"membership", v.membership}, {"max", v.max()},
                  {"eps", err.eps},             {"eps_com", err.com},   {"eps_lin", err.lin},
                  {"eps_ang", err.ang},         {"tol", tol},           {"ok", v.ok(tol)}};
  std::cout << j.dump(2) << "\n";
  if (c.out_dir) cscp::io::write_text(fs::path(*c.out_dir) / "check.json", j.dump(2) + "\n");
  return v.ok(tol) ? kOk : kNotConverged;
}

int cmd_bench(const Common& c, const std::vector<int>& horizons, int repeats) {
  const auto sc = load(c);
  if (sc.has_planned_contacts())
    throw cscp::io::ScenarioError("/schedule/phases", "benchmarking needs every phase assigned to a surface");
  std::ostringstream table;
  table << "horizon,dt,iterations,converged,eps,seconds\n";
  bool all_converged = true;
  for (int N : horizons) {
    if (N < 1) throw cscp::io::ScenarioError("", "horizons must be positive");
    const auto spec = cscp::io::resample_horizon(sc.spec, N);
    double best = 0.0;
    cscp::scp::ScpReport report;
    for (int r = 0; r < repeats; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      report = cscp::scp::solve_scp(spec, sc.scp);
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      best = r == 0 ? s : std::min(best, s);
    }
    all_converged = all_converged && report.converged;
    table << N << ',' << spec.dt_init << ',' << report.total_iterations() << ',' << (report.converged ? 1 : 0)
          << ',' << (report.iterations.empty() ? 0.0 : report.last().eps.eps) << ',' << best << "\n";
  }
  std::cout << table.str();
  if (c.out_dir) cscp::io::write_text(fs::path(*c.out_dir) / "bench.csv", table.str());
  return all_converged ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-contact centroidal trajectory optimizer"};
  app.require_subcommand(1);

  Common solve_opts, plan_opts, check_opts, bench_opts;
  auto* solve = app.add_subcommand("solve", "Sequential convex programming on a scenario");
  add_common(solve, solve_opts);

  auto* plan = app.add_subcommand("plan", "Mixed-integer contact planning, optionally refined by SCP");
  add_common(plan, plan_opts);
  std::optional<std::string> terrain;
  bool refine = false;
  plan->add_option("--terrain", terrain, "Terrain JSON (array of surfaces) replacing the scenario's")
      ->check(CLI::ExistingFile);
  plan->add_flag("--refine", refine, "Run SCP on the planned contacts");

  auto* check = app.add_subcommand("check", "Feasibility report of a trajectory CSV");
  add_common(check, check_opts);
  std::string trajectory;
  double check_tol = 1e-6;
  check->add_option("trajectory", trajectory, "Trajectory CSV")->required()->check(CLI::ExistingFile);
  check->add_option("--violation-tol", check_tol, "Largest acceptable violation");

  auto* bench = app.add_subcommand("bench", "Timing sweep over horizons");
  add_common(bench, bench_opts);
  std::vector<int> horizons = {20, 40, 60, 80, 100};
  int repeats = 1;
  bench->add_option("--horizons", horizons, "Comma-separated horizons")->delimiter(',');
  bench->add_option("--repeats", repeats, "Timed repetitions per horizon (best is reported)")
      ->check(CLI::PositiveNumber);

  auto* canon = app.add_subcommand("canon", "Print the canonical form of a scenario");
  std::string canon_path;
  canon->add_option("scenario", canon_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*solve) return cmd_solve(solve_opts);
    if (*plan) return cmd_plan(plan_opts, terrain, refine);
    if (*check) return cmd_check(check_opts, trajectory, check_tol);
    if (*bench) {
      std::sort(horizons.begin(), horizons.end());
      return cmd_bench(bench_opts, horizons, repeats);
    }
    if (*canon) {
      std::cout << cscp::io::canonical_dump(cscp::io::scenario_to_json(cscp::io::load_scenario(canon_path)));
      return kOk;
    }
  } catch (const cscp::io::ScenarioError& e) {
    std::fprintf(stderr, "input error at %s\n", e.what());
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  }
  return kInputError;
}
