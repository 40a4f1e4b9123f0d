#include <benchmark/benchmark.h>

#include "kpi/control_profile.hpp"
#include "kpi/hum.hpp"
#include "kpi/observability.hpp"
#include "kpi/propagator.hpp"
#include "kpi/random_fields.hpp"
#include "kpi/spectral_constant.hpp"

using namespace kpi;

namespace {

const DispersionParams kp = DispersionParams::full(2.0);

void BM_Evolve(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0));
  const TorusGrid g = TorusGrid::plane(nx, nx / 16);
  Rng rng(1);
  const SpectralField u = random_field(g, rng);
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(u, t, kp));
    t += 0.1;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_Evolve)->Arg(256)->Arg(1024);

void BM_AssembleBlock(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const TorusGrid g = TorusGrid::plane(4 * K, 16);
  const Observation obs = vertical(default_profile(g.x_axis()));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_block(x_window(K, 3), 1.0, obs, kp));
}
BENCHMARK(BM_AssembleBlock)->Arg(16)->Arg(32);

void BM_HumApply(benchmark::State& state) {
  const TorusGrid g = TorusGrid::plane(128, 16);
  const Observation obs = vertical(default_profile(g.x_axis()));
  const HumOperator op(g, hum_window(g, 16, 4), 1.0, obs, kp);
  Rng rng(2);
  const SpectralField v = random_field(g, rng, 16, 4);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(v));
}
BENCHMARK(BM_HumApply);

void BM_SpectralConstant(benchmark::State& state) {
  const ControlProfile g = default_profile(TorusGrid::line(1024));
  const int m0 = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_constant(g, m0));
}
BENCHMARK(BM_SpectralConstant)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
