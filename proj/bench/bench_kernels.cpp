// Serial reference vs OpenMP versions of the two parallel kernels.

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "ccnsim/config.hpp"
#include "ccnsim/experiment.hpp"
#include "ccnsim/topology.hpp"

namespace {

ccnsim::Graph grid_graph(int side) {
  ccnsim::Graph g;
  for (int i = 0; i < side * side; ++i) {
    g.add_node("n" + std::to_string(i), ccnsim::kRoleRouter);
  }
  auto id = [side](int r, int c) { return ccnsim::RouterId{static_cast<std::uint32_t>(r * side + c)}; };
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      if (c + 1 < side) g.add_edge(id(r, c), id(r, c + 1), 1.0, 0.0);
      if (r + 1 < side) g.add_edge(id(r, c), id(r + 1, c), 1.0, 0.0);
    }
  }
  return g;
}

void BM_SptSerial(benchmark::State& state) {
  const auto g = grid_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccnsim::build_all_spt_serial(g));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}

void BM_SptParallel(benchmark::State& state) {
  const auto g = grid_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccnsim::build_all_spt(g));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}

ccnsim::RunConfig sweep_config() {
  auto c = ccnsim::load_config(std::string(CCNSIM_SOURCE_DIR) + "/configs/fig6.cfg");
  c.scenario.sim_duration = 60;
  c.repeats = 1;
  c.sweep_values = {0.05, 0.1, 0.2, 0.4};
  return c;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto c = sweep_config();
  const auto g = ccnsim::load_scenario_topology(c.scenario);
  const auto points = ccnsim::plan_sweep(c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccnsim::run_points_serial(points, g));
  }
}

void BM_SweepParallel(benchmark::State& state) {
  const auto c = sweep_config();
  const auto g = ccnsim::load_scenario_topology(c.scenario);
  const auto points = ccnsim::plan_sweep(c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccnsim::run_points(points, g, 0));
  }
}

}  // namespace

BENCHMARK(BM_SptSerial)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SptParallel)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
