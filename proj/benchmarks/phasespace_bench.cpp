#include <benchmark/benchmark.h>

#include <random>

#include "sweq/phasespace.hpp"
#include "sweq/unitary.hpp"

namespace {

sweq::ComplexMatrix random_state(const sweq::CompositeSpace& space) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  sweq::ComplexVector v(space.total_dim());
  for (auto& x : v) x = {n(rng), n(rng)};
  v.normalize();
  return v * v.adjoint();
}

}  // namespace

static void BM_Wigner(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const sweq::PhaseGrid grid(5.0, m);
  const sweq::CompositeSpace space(1, sweq::FockBasis(8));
  const auto rho = random_state(space);
  for (auto _ : state) benchmark::DoNotOptimize(sweq::wigner(rho, grid));
}
BENCHMARK(BM_Wigner)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_HusimiDensity(benchmark::State& state) {
  const sweq::PhaseGrid grid = sweq::PhaseGrid::default_grid();
  const sweq::CompositeSpace space(2, sweq::FockBasis(static_cast<int>(state.range(0))));
  const auto rho = random_state(space);
  for (auto _ : state) benchmark::DoNotOptimize(sweq::husimi_density(rho, space, grid));
}
BENCHMARK(BM_HusimiDensity)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SharpDensity(benchmark::State& state) {
  const sweq::PhaseGrid grid = sweq::PhaseGrid::default_grid();
  const sweq::CompositeSpace space(2, sweq::FockBasis(8));
  const auto rho = random_state(space);
  for (auto _ : state) benchmark::DoNotOptimize(sweq::sharp_density(rho, space, grid));
}
BENCHMARK(BM_SharpDensity)->Unit(benchmark::kMillisecond);

static void BM_CoarseGrain(benchmark::State& state) {
  const sweq::PhaseGrid grid = sweq::PhaseGrid::default_grid();
  const sweq::CompositeSpace space(2, sweq::FockBasis(8));
  const auto sharp = sweq::sharp_density(random_state(space), space, grid);
  for (auto _ : state) benchmark::DoNotOptimize(sweq::coarse_grain(sharp));
}
BENCHMARK(BM_CoarseGrain)->Unit(benchmark::kMillisecond);
