#include <benchmark/benchmark.h>

#include <memory>

#include "aasipp/prioritized.hpp"
#include "aasipp/validator.hpp"

namespace {

using namespace aasipp;

void BM_SweptCells(benchmark::State& state) {
  const int len = static_cast<int>(state.range(0));
  std::vector<CellIndex> out;
  for (auto _ : state) {
    swept_cells({0, 0}, {len, len / 3}, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_SweptCells)->Arg(4)->Arg(32)->Arg(256);

void BM_SingleAgent(benchmark::State& state) {
  const GridMap grid(64, 64);
  const PlannerMode mode = state.range(0) ? PlannerMode::any_angle_mode() : PlannerMode::cardinal();
  const Instance crowd = generate_instance(std::make_shared<GridMap>(grid), 20, 3, SeparatedProtocol{});
  const Solution others = plan_all(crowd, mode);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan(grid, others.trajectories, {0, 0}, {63, 63}, mode));
  }
}
BENCHMARK(BM_SingleAgent)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_PlanAll(benchmark::State& state) {
  const auto grid = std::make_shared<GridMap>(32, 32);
  const Instance inst = generate_instance(grid, static_cast<std::size_t>(state.range(0)), 11, SeparatedProtocol{});
  for (auto _ : state) benchmark::DoNotOptimize(plan_all(inst, PlannerMode::any_angle_mode()));
}
BENCHMARK(BM_PlanAll)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Validate(benchmark::State& state) {
  const auto grid = std::make_shared<GridMap>(32, 32);
  const Instance inst = generate_instance(grid, 10, 11, SeparatedProtocol{});
  const Solution s = plan_all(inst, PlannerMode::any_angle_mode());
  for (auto _ : state) benchmark::DoNotOptimize(validate_solution(inst, s));
}
BENCHMARK(BM_Validate)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
