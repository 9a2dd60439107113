#include <benchmark/benchmark.h>

#include <vector>

#include "qplr/cocycle.hpp"
#include "qplr/linalg.hpp"
#include "qplr/operators.hpp"
#include "qplr/reference.hpp"
#include "qplr/spectral.hpp"
#include "qplr/transport.hpp"

namespace {

const qplr::Potential kAmo = qplr::Potential::almost_mathieu(0.5);
const qplr::FrequencyVector kGolden = qplr::FrequencyVector::golden();

qplr::PhaseSampling phases(long count) { return {qplr::PhaseMode::equidistributed, static_cast<std::size_t>(count), 0}; }

void BM_IdsParallel(benchmark::State& state) {
  const auto grid = qplr::linear_grid(-3.1, 3.1, 201);
  for (auto _ : state)
    benchmark::DoNotOptimize(qplr::ids(kAmo, kGolden, static_cast<std::size_t>(state.range(0)), phases(8), grid));
}
BENCHMARK(BM_IdsParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_IdsSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        qplr::reference::pooled_levels(kAmo, kGolden, static_cast<std::size_t>(state.range(0)), phases(8)));
}
BENCHMARK(BM_IdsSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_KotaniParallel(benchmark::State& state) {
  const qplr::KotaniOptions options{1e-3, 100, 0};
  for (auto _ : state) benchmark::DoNotOptimize(qplr::kotani_density(kAmo, kGolden, 0.3, options));
}
BENCHMARK(BM_KotaniParallel)->Unit(benchmark::kMillisecond);

void BM_KotaniSerial(benchmark::State& state) {
  const qplr::KotaniOptions options{1e-3, 100, 0};
  for (auto _ : state) benchmark::DoNotOptimize(qplr::reference::kotani_density(kAmo, kGolden, 0.3, options));
}
BENCHMARK(BM_KotaniSerial)->Unit(benchmark::kMillisecond);

void BM_CesaroNorm(benchmark::State& state) {
  const auto w = qplr::Window::centered(static_cast<std::size_t>(state.range(0)));
  const double x = 0.0;
  const auto s = qplr::eigensolve(qplr::build_effective(kAmo, kGolden, std::span<const double>(&x, 1), w));
  const qplr::CesaroAverager avg(s, qplr::build_velocity(w));
  for (auto _ : state) benchmark::DoNotOptimize(avg.average(static_cast<double>(state.range(0)) / 8.0, false));
}
BENCHMARK(BM_CesaroNorm)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_LightConeParallel(benchmark::State& state) {
  const auto w = qplr::Window::centered(1024);
  const double x = 0.0;
  const auto s = qplr::eigensolve(qplr::build_effective(kAmo, kGolden, std::span<const double>(&x, 1), w));
  const auto times = qplr::linear_grid(8.0, 64.0, 8);
  for (auto _ : state) benchmark::DoNotOptimize(qplr::light_cone(s, w.center(), times, 2.0));
}
BENCHMARK(BM_LightConeParallel)->Unit(benchmark::kMillisecond);

void BM_LightConeSerial(benchmark::State& state) {
  const auto w = qplr::Window::centered(1024);
  const double x = 0.0;
  const auto s = qplr::eigensolve(qplr::build_effective(kAmo, kGolden, std::span<const double>(&x, 1), w));
  const auto times = qplr::linear_grid(8.0, 64.0, 8);
  for (auto _ : state) benchmark::DoNotOptimize(qplr::reference::light_cone(s, w.center(), times, 2.0));
}
BENCHMARK(BM_LightConeSerial)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  if (!qplr::linalg::ensure_working_blas(argv)) return 3;
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
