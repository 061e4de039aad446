#include <benchmark/benchmark.h>

#include "jtm/market.hpp"
#include "jtm/monte_carlo.hpp"
#include "jtm/optimal_policy.hpp"
#include "jtm/telegraph_moments.hpp"

namespace {

jtm::MarketParams example(double horizon = 10.0) {
  return jtm::MarketParams(
      {jtm::RegimeSpec{0.01, 0.16, 0.3, jtm::MarkDistribution::negative_power(1.0)},
       jtm::RegimeSpec{0.01, -0.2, 1.2, jtm::MarkDistribution::positive_power(2.0)}},
      horizon);
}

void BM_SimulatePath(benchmark::State& state) {
  const auto p = example(static_cast<double>(state.range(0)));
  std::uint64_t k = 0;
  for (auto _ : state) {
    auto path = jtm::simulate_regime_path(p, 0, 1, k++);
    benchmark::DoNotOptimize(path.events.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_SimulatePath)->Arg(1)->Arg(10)->Arg(100);

void BM_MeanJumpQuadrature(benchmark::State& state) {
  const auto dist = state.range(0) == 0 ? jtm::MarkDistribution::negative_power(1.0)
                                        : jtm::MarkDistribution::positive_power(2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jtm::mean_jump(dist, jtm::JumpMap::identity()));
  }
}
BENCHMARK(BM_MeanJumpQuadrature)->Arg(0)->Arg(1);

void BM_SolveLog(benchmark::State& state) {
  const auto p = example();
  for (auto _ : state) benchmark::DoNotOptimize(jtm::solve_log(p).pi_bar.data());
}
BENCHMARK(BM_SolveLog)->Unit(benchmark::kMicrosecond);

void BM_SolvePower(benchmark::State& state) {
  jtm::MarketOptions opt;
  opt.allow_nonpositive_rates = true;
  const jtm::MarketParams p(
      {jtm::RegimeSpec{-0.003849795672085654, 0.11394576207131646, 0.3,
                       jtm::MarkDistribution::negative_power(2.0)},
       jtm::RegimeSpec{-0.011342811848420897, -0.34748885753404274, 1.2,
                       jtm::MarkDistribution::point_mass(0.25)}},
      2.0, {}, opt);
  for (auto _ : state) benchmark::DoNotOptimize(jtm::solve_power(p, 0.3).pi_bar.data());
}
BENCHMARK(BM_SolvePower)->Unit(benchmark::kMicrosecond);

void BM_MonteCarloMean(benchmark::State& state) {
  const auto p = example();
  const jtm::McJob job{jtm::fn::TelegraphMean{10.0}, static_cast<std::uint64_t>(state.range(0)), 0, 1,
                       static_cast<unsigned>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(jtm::run(p, job).mean);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_MonteCarloMean)->Args({10000, 1})->Args({10000, 4})->Unit(benchmark::kMillisecond);

void BM_ClosedFormExpMoment(benchmark::State& state) {
  jtm::TelegraphSpec s;
  s.tendency = {0.05, -0.1};
  s.intensity = {0.3, 1.2};
  s.jump_mean = {-0.4, 0.25};
  s.jump_exp_moment = {0.7, 1.28};
  double t = 0.0;
  for (auto _ : state) {
    t = t > 10.0 ? 0.0 : t + 0.01;
    benchmark::DoNotOptimize(jtm::exp_moment(s, t, 0));
  }
}
BENCHMARK(BM_ClosedFormExpMoment);

}  // namespace

BENCHMARK_MAIN();
