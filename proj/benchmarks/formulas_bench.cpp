#include <benchmark/benchmark.h>

#include "parisian/levy_measure.hpp"
#include "parisian/parisian.hpp"

using namespace parisian;

namespace {

DiffusionModel model_for(int index) {
  switch (index) {
    case 0: return DiffusionModel({Family::brownian_drift, 0.0});
    case 1: return DiffusionModel({Family::reflected_bm, 0.0});
    default: return DiffusionModel({Family::bessel3_drift, 1.0});
  }
}

void BM_PairLaplace(benchmark::State& state) {
  const DiffusionModel m = model_for(static_cast<int>(state.range(0)));
  const TwoBarrierQuery q{2.0, 3.0, 2.5, 1.0, 1.0, 0.5, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(pair_laplace(m, q));
  state.SetLabel(to_string(m.family()));
}
BENCHMARK(BM_PairLaplace)->DenseRange(0, 2);

void BM_QuadrupleTransform(benchmark::State& state) {
  const DiffusionModel m = model_for(static_cast<int>(state.range(0)));
  const TwoBarrierQuery q{2.0, 3.0, 2.5, 1.0, 1.0, 0.5, 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadruple_transform(m, q, BoundedWeight::one(), BoundedWeight::one()).value);
  }
  state.SetLabel(to_string(m.family()));
}
BENCHMARK(BM_QuadrupleTransform)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_OrderProbability(benchmark::State& state) {
  const DiffusionModel m = model_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(order_probability(m, 2.0, 3.0, 2.5, 1.0, 1.0));
  state.SetLabel(to_string(m.family()));
}
BENCHMARK(BM_OrderProbability)->DenseRange(0, 2);

void BM_LevyExpTail(benchmark::State& state) {
  const DiffusionModel m = model_for(static_cast<int>(state.range(0)));
  const LevyMeasure nu = m.levy(1.0, Sign::minus);
  for (auto _ : state) benchmark::DoNotOptimize(nu.exp_tail(0.7, 1.3));
  state.SetLabel(to_string(m.family()));
}
BENCHMARK(BM_LevyExpTail)->DenseRange(0, 2);

void BM_MeanderNormalization(benchmark::State& state) {
  const DiffusionModel m = model_for(static_cast<int>(state.range(0)));
  const double level = m.family() == Family::bessel3_drift ? 2.0 : 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(meander_expectation(m, level, MeanderDirection::down, 1.0, BoundedWeight::one()));
  }
  state.SetLabel(to_string(m.family()));
}
BENCHMARK(BM_MeanderNormalization)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
