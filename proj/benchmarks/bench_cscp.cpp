#include <filesystem>
#include <string>

#include <benchmark/benchmark.h>

#include "cscp/conic/solver.hpp"
#include "cscp/io/scenario.hpp"
#include "cscp/scp/builder.hpp"
#include "cscp/scp/scp.hpp"

namespace {

using namespace cscp;

io::Scenario load(const std::string& name) {
  return io::load_scenario(std::filesystem::path(CSCP_SCENARIO_DIR) / (name + ".json"));
}

scp::ScpSettings settings_for(const io::Scenario& sc, io::Mode mode) {
  scp::ScpSettings st = sc.scp;
  io::apply_mode(st, mode);
  return st;
}

relax::RelaxationState first_state(const scp::ScpSettings& st) {
  relax::RelaxationState r;
  r.mode = st.relaxation;
  r.rho0 = st.rho0;
  r.nu = st.nu;
  r.soft_penalty = st.soft_penalty;
  r.slack_weight = st.slack_weight;
  return r;
}

// First SCP subproblem of the flat walk at horizon N.
void BM_BuildSubproblem(benchmark::State& state) {
  const io::Scenario sc = load("flat_walk");
  const auto spec = io::resample_horizon(sc.spec, static_cast<int>(state.range(0)));
  const auto st = settings_for(sc, io::Mode::Momentum);
  for (auto _ : state) benchmark::DoNotOptimize(scp::build_subproblem(spec, st, first_state(st)));
}
BENCHMARK(BM_BuildSubproblem)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SolveSubproblem(benchmark::State& state) {
  const io::Scenario sc = load("flat_walk");
  const auto spec = io::resample_horizon(sc.spec, static_cast<int>(state.range(0)));
  const auto st = settings_for(sc, io::Mode::Momentum);
  const auto sub = scp::build_subproblem(spec, st, first_state(st));
  int iters = 0;
  for (auto _ : state) {
    const auto sol = conic::solve(sub.program, st.solver);
    iters = sol.iterations;
    benchmark::DoNotOptimize(sol.objective);
  }
  state.counters["vars"] = static_cast<double>(sub.program.num_vars());
  state.counters["ipm_iters"] = iters;
}
BENCHMARK(BM_SolveSubproblem)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

// Full SCP solve per scenario in a given mode.
void BM_Scp(benchmark::State& state, const std::string& name, io::Mode mode) {
  const io::Scenario sc = load(name);
  const auto st = settings_for(sc, mode);
  int iters = 0;
  for (auto _ : state) {
    const auto rep = scp::solve_scp(sc.spec, st);
    iters = rep.total_iterations();
    benchmark::DoNotOptimize(rep.converged);
  }
  state.counters["scp_iters"] = iters;
}
BENCHMARK_CAPTURE(BM_Scp, static_stand, std::string("static_stand"), io::Mode::Momentum)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Scp, flat_walk, std::string("flat_walk"), io::Mode::Momentum)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Scp, gallop, std::string("gallop"), io::Mode::Momentum)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Scp, asymmetric_walk_contacts, std::string("asymmetric_walk"), io::Mode::Contacts)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Scp, tilted_stairs_time, std::string("tilted_stairs_mu035"), io::Mode::Time)
    ->Unit(benchmark::kMillisecond);

// Horizon scaling of the fixed-time walk.
void BM_ScpHorizon(benchmark::State& state) {
  const io::Scenario sc = load("flat_walk");
  const auto spec = io::resample_horizon(sc.spec, static_cast<int>(state.range(0)));
  const auto st = settings_for(sc, io::Mode::Momentum);
  for (auto _ : state) benchmark::DoNotOptimize(scp::solve_scp(spec, st).converged);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ScpHorizon)->DenseRange(20, 100, 20)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
