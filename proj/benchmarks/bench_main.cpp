#include <benchmark/benchmark.h>

#include "gaussbounds/fock.hpp"
#include "gaussbounds/hcrb.hpp"
#include "gaussbounds/models.hpp"

using namespace gaussbounds;

namespace {

ModelJet ds_jet(int modes, double r) {
  const Vec theta = (Vec(3) << 0.3, -0.2, r).finished();
  return modes == 1 ? disp_squeeze_single_model(0.5).jet(theta) : disp_squeeze_two_model(0.5).jet(theta);
}

void BM_BuildKernel(benchmark::State& state) {
  const ModelJet jet = ds_jet(static_cast<int>(state.range(0)), 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(build_kernel(jet.state().sigma()));
}
BENCHMARK(BM_BuildKernel)->Arg(1)->Arg(2);

void BM_Information(benchmark::State& state) {
  const ModelJet jet = ds_jet(static_cast<int>(state.range(0)), 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(information(jet));
}
BENCHMARK(BM_Information)->Arg(1)->Arg(2);

void BM_SolveHcrb(benchmark::State& state) {
  const ModelJet jet = ds_jet(static_cast<int>(state.range(0)), 0.4);
  const WeightMatrix W = WeightMatrix::identity(3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_hcrb(jet, W));
}
BENCHMARK(BM_SolveHcrb)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SolveHcrbRegularized(benchmark::State& state) {
  const ModelJet jet = phase_loss_model(0.3, 0.0, 0.0).jet((Vec(2) << 0.0, 0.5).finished());
  const WeightMatrix W = WeightMatrix::identity(2);
  HcrbOptions o;
  o.extrapolate = true;
  for (auto _ : state) benchmark::DoNotOptimize(solve_hcrb(jet, W, o));
}
BENCHMARK(BM_SolveHcrbRegularized)->Unit(benchmark::kMillisecond);

void BM_FockSynthesis(benchmark::State& state) {
  const ModelJet jet = ds_jet(1, 0.3);
  const int cutoff = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_fock(jet.state(), cutoff));
}
BENCHMARK(BM_FockSynthesis)->Arg(40)->Arg(60)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
