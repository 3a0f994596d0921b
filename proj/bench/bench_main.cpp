#include <benchmark/benchmark.h>

#include <random>

#include "subsel/classifiers.hpp"
#include "subsel/kernels.hpp"
#include "subsel/optimizer.hpp"
#include "subsel/synth.hpp"

using namespace subsel;

namespace {

FeatureDataset points(std::size_t n, std::size_t d = 32) {
  SyntheticSpec spec{8, n / 8, d, 1.0, 4, ClassRule::modulo, 1, 5.0, 3.0};
  return generate_synthetic(spec, {42});
}

Exec policy(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void BM_Cosine(benchmark::State& state) {
  auto ds = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cosine_similarity(ds, {policy(state)}));
}

void BM_Euclidean(benchmark::State& state) {
  auto ds = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(euclidean_distance(ds, {policy(state)}));
}

void BM_Knn(benchmark::State& state) {
  auto train = points(static_cast<std::size_t>(state.range(0)));
  auto queries = points(512);
  for (auto _ : state) benchmark::DoNotOptimize(knn_predict_proba(train, queries, 5, policy(state)));
}

void BM_NaiveGreedy(benchmark::State& state) {
  auto ds = points(static_cast<std::size_t>(state.range(0)));
  FacilityLocation f(std::make_shared<SimilarityMatrix>(cosine_similarity(ds)));
  for (auto _ : state) benchmark::DoNotOptimize(naive_greedy(f, 50, nullptr, {policy(state)}));
}

void BM_LazyGreedy(benchmark::State& state) {
  auto ds = points(static_cast<std::size_t>(state.range(0)));
  FacilityLocation f(std::make_shared<SimilarityMatrix>(cosine_similarity(ds)));
  GreedyStats stats;
  for (auto _ : state) benchmark::DoNotOptimize(lazy_greedy(f, 50, &stats));
  state.counters["gain_evals"] = static_cast<double>(stats.gain_evaluations);
}

}  // namespace

// Second argument: 0 = serial reference, 1 = OpenMP.
BENCHMARK(BM_Cosine)->ArgsProduct({{512, 2048}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Euclidean)->ArgsProduct({{512, 2048}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Knn)->ArgsProduct({{2048, 8192}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NaiveGreedy)->ArgsProduct({{1024, 2048}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LazyGreedy)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
