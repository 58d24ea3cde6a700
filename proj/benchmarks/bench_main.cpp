#include <benchmark/benchmark.h>

#include <vector>

#include "pnl/counterexample.hpp"
#include "pnl/hsic.hpp"
#include "pnl/nlica.hpp"
#include "pnl/ode.hpp"
#include "pnl/rng.hpp"

namespace {

pnl::ColumnBlock randomBlock(int n, int p, std::uint64_t seed) {
  pnl::Rng rng(seed);
  pnl::ColumnBlock block(p, std::vector<double>(n));
  for (auto& col : block)
    for (auto& v : col) v = rng.normal();
  return block;
}

void BM_HsicStatistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = randomBlock(n, 1, 11);
  const auto y = randomBlock(n, 1, 12);
  for (auto _ : state) benchmark::DoNotOptimize(pnl::hsicStatistic(x, y));
  state.SetComplexityN(n);
}
BENCHMARK(BM_HsicStatistic)->Arg(128)->Arg(256)->Arg(512)->Arg(1024)
    ->Complexity();

void BM_HsicTest(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = randomBlock(n, 1, 21);
  const auto y = randomBlock(n, 1, 22);
  for (auto _ : state)
    benchmark::DoNotOptimize(pnl::hsicTest(x, y, 0.05, {}, 7));
}
BENCHMARK(BM_HsicTest)->Arg(500)->Arg(2000);

void BM_ClosureSolve(benchmark::State& state) {
  pnl::Sol1Params params;
  params.step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(pnl::solveSituation5(params));
}
BENCHMARK(BM_ClosureSolve)->Arg(250)->Arg(1000);

void BM_BuildCounterexample(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(pnl::buildCounterexample(pnl::Situation::kV));
}
BENCHMARK(BM_BuildCounterexample);

void BM_ObjectiveAndGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  pnl::Rng rng(33);
  std::vector<double> x1(n), x2(n);
  for (int i = 0; i < n; ++i) {
    x1[i] = rng.uniform(-1.0, 1.0);
    const double u = x1[i] + 0.5 * x1[i] * x1[i] * x1[i] +
                     rng.uniform(-0.3, 0.3);
    x2[i] = u + 0.2 * u * u * u;
  }
  pnl::PnlObjective obj({x1}, x2, 10, pnl::NoiseDensityModel::fit(x2, 3));
  std::vector<double> theta(obj.paramCount());
  for (auto& v : theta) v = 0.1 * rng.normal();
  std::vector<double> grad(theta.size());
  for (auto _ : state)
    benchmark::DoNotOptimize(obj.objectiveAndGradient(theta, grad));
}
BENCHMARK(BM_ObjectiveAndGradient)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
