#include <benchmark/benchmark.h>

#include "oamopo/oamopo.hpp"

using namespace oamopo;

static void BM_RhsLgBasis(benchmark::State& state) {
  const OpoParams p;
  const FiveModeState x{Complex(0.4, 0.1), {Complex(0.2, 0.0), Complex(0.1, -0.3)}, {Complex(-0.1, 0.2), 0.05}};
  const InjectionDrive d{Complex(0.5, 0.0), mode_from_sphere({1.0, 0.3}, 0.04)};
  for (auto _ : state) benchmark::DoNotOptimize(rhs_lg_basis(x, p, d));
}
BENCHMARK(BM_RhsLgBasis);

static void BM_Rk4Step(benchmark::State& state) {
  const OpoParams p;
  const auto drive = constant_drive({Complex(0.5, 0.0), mode_from_sphere({1.0, 0.3}, 0.04)});
  FiveModeState x{};
  for (auto _ : state) {
    x = rk4_step(x, 0.0, 0.02, p, drive);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_Rk4Step);

static void BM_QuinticRoots(benchmark::State& state) {
  const QuinticCoeffs q{0.5, 0.2, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(quintic_real_roots(q));
}
BENCHMARK(BM_QuinticRoots);

static void BM_SolidAngle(benchmark::State& state) {
  const auto path = lune_path(1.5707963267948966);
  for (auto _ : state) benchmark::DoNotOptimize(solid_angle(path));
}
BENCHMARK(BM_SolidAngle);

static void BM_SynthesizeField(benchmark::State& state) {
  const GridSpec g{static_cast<int>(state.range(0)), 3.0, 1.0};
  const ModeVector v = mode_from_sphere({1.0, 0.3}, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_field(v, 0.2, g));
  state.SetItemsProcessed(state.iterations() * g.n * g.n);
}
BENCHMARK(BM_SynthesizeField)->Arg(128)->Arg(256)->Arg(512);

static void BM_PatternRotation(benchmark::State& state) {
  const GridSpec g{256, 3.0, 1.0};
  const auto before = mutual_interference(synthesize_field({1.0, 0.0}, 0.0, g), synthesize_field({0.0, 1.0}, 0.0, g));
  const auto after = mutual_interference(synthesize_field({1.0, 0.0}, 0.0, g), synthesize_field({0.0, 1.0}, 1.0, g));
  for (auto _ : state) benchmark::DoNotOptimize(pattern_rotation(before, after));
}
BENCHMARK(BM_PatternRotation);

BENCHMARK_MAIN();
