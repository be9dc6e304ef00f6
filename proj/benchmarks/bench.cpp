#include <benchmark/benchmark.h>

#include "covertour/cover.hpp"
#include "covertour/generate.hpp"
#include "covertour/tour.hpp"

namespace {

using namespace covertour;

const MetricSpace& grid() {
  static MetricSpace space = metric_closure(grid_graph(10, 10));
  return space;
}

Instance instance_of(int n) {
  return synth_instances(grid(), ProblemKind::Tsp, 1, n, 10.0, 7)[0];
}

void BM_ExactTour(benchmark::State& state) {
  Instance inst = instance_of(static_cast<int>(state.range(0)));
  TourProblem p;
  p.space = &grid();
  p.requests = inst.requests;
  for (auto _ : state) benchmark::DoNotOptimize(exact_tour(p).completion);
}
BENCHMARK(BM_ExactTour)->DenseRange(6, 12, 2);

void BM_ApproxTour(benchmark::State& state) {
  Instance inst = instance_of(static_cast<int>(state.range(0)));
  TourProblem p;
  p.space = &grid();
  p.requests = inst.requests;
  for (auto _ : state) benchmark::DoNotOptimize(approx_tour(p).completion);
}
BENCHMARK(BM_ApproxTour)->RangeMultiplier(2)->Range(8, 64);

void BM_CoverDp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Instance actual = instance_of(n);
  NoiseSpec noise;
  noise.sigma_location = 2.0;
  noise.seed = 11;
  PredictionSet pred = perturb(grid(), actual, noise);
  for (auto _ : state)
    benchmark::DoNotOptimize(lambda_k(grid(), actual, pred, 2).lambda_k);
}
BENCHMARK(BM_CoverDp)->DenseRange(4, 10, 2);

}  // namespace

BENCHMARK_MAIN();
