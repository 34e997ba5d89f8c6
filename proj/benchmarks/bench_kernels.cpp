#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "sparselv/dynamics.hpp"
#include "sparselv/equilibrium.hpp"
#include "sparselv/graph_patterns.hpp"
#include "sparselv/interaction.hpp"

using namespace sparselv;

namespace {

InteractionMatrix make_matrix(std::size_t n, std::size_t d, double kappa) {
  auto p = std::make_shared<const AdjacencyPattern>(general_regular_pattern(n, d, 7));
  return InteractionMatrix::assemble(p, std::sqrt(kappa * std::log(double(n))), 11);
}

void BM_Matvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = make_matrix(n, 16, 4.0);
  std::vector<double> x(n, 1.0), y(n);
  for (auto _ : state) {
    m.matvec(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * 16));
}
BENCHMARK(BM_Matvec)->Arg(2000)->Arg(15000);

void BM_GeneralRegularPattern(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(general_regular_pattern(n, 16, ++seed));
}
BENCHMARK(BM_GeneralRegularPattern)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SolveFeasibility(benchmark::State& state) {
  const auto m = make_matrix(static_cast<std::size_t>(state.range(0)), 16,
                             static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_feasibility(m));
}
BENCHMARK(BM_SolveFeasibility)->Args({2000, 1})->Args({2000, 4})->Unit(benchmark::kMillisecond);

void BM_SpectralNorm(benchmark::State& state) {
  const auto m = make_matrix(static_cast<std::size_t>(state.range(0)), 16, 4.0);
  SpectralOptions opts;
  opts.tol = 1e-8;
  for (auto _ : state) benchmark::DoNotOptimize(spectral_norm(m, opts));
}
BENCHMARK(BM_SpectralNorm)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_IntegrateLv(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = make_matrix(n, 8, 8.0);
  const std::vector<double> x0(n, 0.5);
  IntegrationControls controls;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_lv(m, x0, 50.0, controls));
}
BENCHMARK(BM_IntegrateLv)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_JacobianSpectrum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = make_matrix(n, 8, 8.0);
  const auto x = solve_feasibility(m).x;
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_spectrum(m, x));
}
BENCHMARK(BM_JacobianSpectrum)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
