#include <random>

#include <benchmark/benchmark.h>

#include "orlicz/certify.hpp"
#include "orlicz/solver.hpp"
#include "orlicz/uniqueness.hpp"

using namespace orlicz;

namespace
{

GridFunction random_target(const GridPtr & g, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  return random_continuous_function(g, rng, 1.0);
}

PhiFunction phi_by_index(int k)
{
  switch (k) {
    case 0: return make_power_phi(1.0);
    case 1: return make_power_phi(2.0);
    case 2: return make_linear_then_convex_phi(1.0, 1.0, 2.0);
    default: return make_staircase_phi(make_power_phi(1.0), dyadic_jumps(8));
  }
}

}  // namespace

static void BM_Modular(benchmark::State & state)
{
  const auto g = make_uniform_grid(0.0, 1.0, static_cast<std::size_t>(state.range(0)), 1e-8);
  const auto f = random_target(g, 1);
  const auto phi = make_linear_then_convex_phi(1.0, 0.5, 2.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(modular(phi, f));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Modular)->RangeMultiplier(4)->Range(256, 16384);

static void BM_Solve(benchmark::State & state)
{
  const auto g = make_uniform_grid(0.0, 1.0, 2048, 1e-8);
  const auto s = make_monomial_subspace(g, static_cast<std::size_t>(state.range(1)));
  const auto phi = phi_by_index(static_cast<int>(state.range(0)));
  const auto f = random_target(g, 2);
  SolverConfig cfg;
  cfg.n_starts = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(f, s, phi, cfg));
  }
}
BENCHMARK(BM_Solve)
->ArgsProduct({{0, 1, 2, 3}, {1, 2, 3}})
->ArgNames({"phi", "n"})
->Unit(benchmark::kMillisecond);

static void BM_Certificate(benchmark::State & state)
{
  const auto g = make_uniform_grid(0.0, 1.0, static_cast<std::size_t>(state.range(0)), 1e-8);
  const auto s = make_monomial_subspace(g, 3);
  const auto phi = make_power_phi(2.0);
  const auto f = random_target(g, 3);
  const auto p = s.evaluate(s.least_squares(f));
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_characterization(f, p, s, phi, 1e-6));
  }
}
BENCHMARK(BM_Certificate)->RangeMultiplier(4)->Range(256, 16384);

static void BM_UniquenessProbe(benchmark::State & state)
{
  const auto g = make_uniform_grid(0.0, 1.0, 1025, 1e-8);
  const auto s = make_monomial_subspace(g, 2);
  const auto phi = make_linear_then_convex_phi(1.0, 1.0, 2.0);
  const auto f = random_target(g, 4);
  SolverConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(uniqueness_probe(f, s, phi, cfg, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_UniquenessProbe)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Oracle(benchmark::State & state)
{
  const auto g = make_uniform_grid(0.0, 1.0, 2048, 1e-8);
  const auto s = make_monomial_subspace(g, 2);
  const auto phi = make_power_phi(1.0);
  const auto f = random_target(g, 5);
  const std::vector<Interval> box{{-3.0, 3.0}, {-6.0, 6.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_oracle(f, s, phi, box, 41, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_Oracle)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
