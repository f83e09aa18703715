#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <tsinfo/estimators.hpp>
#include <tsinfo/measures.hpp>
#include <tsinfo/neighbor_index.hpp>
#include <tsinfo/rng.hpp>
#include <tsinfo/var1.hpp>

namespace {

using namespace tsinfo;

Eigen::MatrixXd normal_draws(long n, long d, std::uint64_t seed) {
  NormalSampler normal(seed);
  Eigen::MatrixXd m(n, d);
  for (long i = 0; i < n; ++i) {
    for (long c = 0; c < d; ++c) m(i, c) = normal.next();
  }
  return m;
}

void BM_NeighborIndexBuild(benchmark::State& state) {
  const Eigen::MatrixXd pts = normal_draws(state.range(0), 3, 1);
  for (auto _ : state) {
    NeighborIndex index(pts);
    benchmark::DoNotOptimize(index);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NeighborIndexBuild)->Range(1 << 10, 1 << 17);

void BM_KthDistanceQueries(benchmark::State& state) {
  const Eigen::MatrixXd pts = normal_draws(state.range(0), 3, 2);
  const NeighborIndex index(pts);
  long i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.kth_distance(i, 4));
    i = (i + 1) % pts.rows();
  }
}
BENCHMARK(BM_KthDistanceQueries)->Range(1 << 10, 1 << 17);

void BM_EntropyKnn(benchmark::State& state) {
  const Eigen::MatrixXd samples = normal_draws(state.range(0), 1, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy_knn(samples, 4));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EntropyKnn)->Range(1 << 10, 1 << 16);

void BM_MiKsg(benchmark::State& state) {
  const Eigen::MatrixXd joint = normal_draws(state.range(0), 2, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mi_ksg(joint.col(0), joint.col(1), 4));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MiKsg)->Range(1 << 10, 1 << 16);

void BM_GaussianTransferEntropy(benchmark::State& state) {
  const Dataset data = gen_var1(var_a_fixture(), state.range(0), 7, 1000, {"x", "y"});
  MeasureRequest req;
  req.id = MeasureId::TransferEntropy;
  req.source = "x";
  req.target = "y";
  req.estimator = EstimatorKind::gaussian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(data, req));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GaussianTransferEntropy)->Range(1 << 12, 1 << 17);

void BM_KsgTransferEntropy(benchmark::State& state) {
  const Dataset data = gen_var1(var_a_fixture(), state.range(0), 7, 1000, {"x", "y"});
  MeasureRequest req;
  req.id = MeasureId::TransferEntropy;
  req.source = "x";
  req.target = "y";
  req.estimator = EstimatorKind::ksg();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(data, req));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KsgTransferEntropy)->Range(1 << 10, 1 << 14);

}  // namespace

BENCHMARK_MAIN();
