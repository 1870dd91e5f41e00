#include <benchmark/benchmark.h>

#include "sbrel/form_sampler.hpp"
#include "sbrel/harness.hpp"
#include "sbrel/pool_gen.hpp"
#include "sbrel/reliability.hpp"

using namespace sbrel;

namespace {

PoolCaseSpec five_dim_case() {
  for (auto& c : study1_case_grid(2, 0)) {
    if (c.case_id == "s1-d5-amax2-aU2-b2") return c;
  }
  return {};
}

void BM_ItemMoments(benchmark::State& state) {
  const NormalRule rule = NormalRule::grid(static_cast<std::size_t>(state.range(0)));
  const ItemParams item{2.5, 0.7, 1};
  for (auto _ : state) benchmark::DoNotOptimize(item_moments(item, rule));
}
BENCHMARK(BM_ItemMoments)->Arg(61)->Arg(201)->Arg(401);

void BM_CalibratePool(benchmark::State& state) {
  const ItemPool pool = build_pool(five_dim_case());
  const NormalRule rule = NormalRule::grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(CalibratedPool(pool, rule));
}
BENCHMARK(BM_CalibratePool)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_EvaluateTrajectory(benchmark::State& state) {
  const CalibratedPool pool(build_pool(five_dim_case()), NormalRule::grid());
  const auto lengths = length_grid(10, 50, 5);
  std::uint64_t r = 0;
  for (auto _ : state) {
    const auto traj = sample_trajectory(pool.pool_size(), lengths, RandomStream(1).child(r++));
    benchmark::DoNotOptimize(pool.evaluate_prefixes(traj.items, traj.lengths));
  }
}
BENCHMARK(BM_EvaluateTrajectory)->Unit(benchmark::kMicrosecond);

void BM_RunCase(benchmark::State& state) {
  const PoolCaseSpec spec = five_dim_case();
  StudyConfig cfg;
  cfg.replicates = 200;
  cfg.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_case(spec, cfg));
}
BENCHMARK(BM_RunCase)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
