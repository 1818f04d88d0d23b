// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "charprobe/clusterlab/kmeans.hpp"

using namespace charprobe::clusterlab;

namespace {

// n points in d dimensions around 8 centers.
Matrix make_data(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> c(-20, 20);
  std::vector<std::vector<double>> centers(8, std::vector<double>(d));
  for (auto& ctr : centers)
    for (auto& x : ctr) x = c(rng);
  Matrix m(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = centers[i % 8][j] + g(rng);
  return m;
}

const KMeansOptions kOpts{.max_iter = 100, .tol = 1e-6, .restarts = 16};

void BM_KMeansBest_Serial(benchmark::State& s) {
  const auto x = make_data(static_cast<std::size_t>(s.range(0)), 64);
  for (auto _ : s) benchmark::DoNotOptimize(serial::kmeans_best(x, 8, 1, kOpts).distortion);
}

void BM_KMeansBest_Parallel(benchmark::State& s) {
  const auto x = make_data(static_cast<std::size_t>(s.range(0)), 64);
  for (auto _ : s) benchmark::DoNotOptimize(kmeans_best(x, 8, 1, kOpts).distortion);
}

void BM_Silhouette_Serial(benchmark::State& s) {
  const auto x = make_data(static_cast<std::size_t>(s.range(0)), 64);
  const auto labels = kmeans(x, 8, 1).assignments;
  for (auto _ : s) benchmark::DoNotOptimize(serial::silhouette(x, labels));
}

void BM_Silhouette_Parallel(benchmark::State& s) {
  const auto x = make_data(static_cast<std::size_t>(s.range(0)), 64);
  const auto labels = kmeans(x, 8, 1).assignments;
  for (auto _ : s) benchmark::DoNotOptimize(silhouette(x, labels));
}

void BM_CalinskiHarabasz_Serial(benchmark::State& s) {
  const auto x = make_data(static_cast<std::size_t>(s.range(0)), 64);
  const auto labels = kmeans(x, 8, 1).assignments;
  for (auto _ : s) benchmark::DoNotOptimize(serial::calinski_harabasz(x, labels));
}

void BM_CalinskiHarabasz_Parallel(benchmark::State& s) {
  const auto x = make_data(static_cast<std::size_t>(s.range(0)), 64);
  const auto labels = kmeans(x, 8, 1).assignments;
  for (auto _ : s) benchmark::DoNotOptimize(calinski_harabasz(x, labels));
}

}  // namespace

BENCHMARK(BM_KMeansBest_Serial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KMeansBest_Parallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Silhouette_Serial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Silhouette_Parallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CalinskiHarabasz_Serial)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_CalinskiHarabasz_Parallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
