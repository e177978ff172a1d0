// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "mtssel/distance.hpp"
#include "mtssel/graph.hpp"
#include "mtssel/info.hpp"
#include "mtssel/parallel.hpp"
#include "mtssel/rng.hpp"
#include "mtssel/spectral.hpp"
#include "mtssel/synthetic.hpp"

using namespace mtssel;

namespace {

const Dataset& bench_dataset() {
  static const Dataset d = [] {
    SyntheticOptions o;
    o.segments = 120;
    o.informative = 1;
    o.noise = 0;
    o.min_length = 60;
    o.max_length = 80;
    return gen_synthetic(o);
  }();
  return d;
}

Matrix random_distances(std::size_t n) {
  CounterRng rng(1);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = rng.uniform();
  return m;
}

SimilarityGraph random_graph(std::size_t n) { return symmetrize(knn_graph_serial(random_distances(n), 10)); }

std::vector<Embedding> random_embeddings(std::size_t m, std::size_t n) {
  CounterRng rng(2);
  std::vector<Embedding> out(m);
  for (auto& e : out) {
    e.values.resize(n);
    for (auto& x : e.values) x = rng.uniform();
  }
  return out;
}

void BM_DistanceMatrixSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(distance_matrix_serial(bench_dataset(), 0));
}
void BM_DistanceMatrixParallel(benchmark::State& state) {
  set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(distance_matrix(bench_dataset(), 0));
}

void BM_KnnSerial(benchmark::State& state) {
  const auto m = random_distances(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(knn_graph_serial(m, 10));
}
void BM_KnnParallel(benchmark::State& state) {
  const auto m = random_distances(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(knn_graph(m, 10));
}

void BM_PieSerial(benchmark::State& state) {
  const auto g = random_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pie_serial(g, {}, 1));
}
void BM_PieParallel(benchmark::State& state) {
  const auto g = random_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pie(g, {}, 1));
}

void BM_RedundancySerial(benchmark::State& state) {
  const auto e = random_embeddings(static_cast<std::size_t>(state.range(0)), 200);
  std::vector<int> y(200);
  for (std::size_t i = 0; i < 200; ++i) y[i] = static_cast<int>(i % 3);
  for (auto _ : state) benchmark::DoNotOptimize(build_redundancy_serial(e, y, 3, PenaltyKind::CMI));
}
void BM_RedundancyParallel(benchmark::State& state) {
  const auto e = random_embeddings(static_cast<std::size_t>(state.range(0)), 200);
  std::vector<int> y(200);
  for (std::size_t i = 0; i < 200; ++i) y[i] = static_cast<int>(i % 3);
  for (auto _ : state) benchmark::DoNotOptimize(build_redundancy(e, y, 3, PenaltyKind::CMI));
}

} // namespace

BENCHMARK(BM_DistanceMatrixSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceMatrixParallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PieSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PieParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RedundancySerial)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RedundancyParallel)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
