#include <benchmark/benchmark.h>

#include <random>

#include "sulcdepth/depth.hpp"
#include "sulcdepth/landmarks.hpp"
#include "sulcdepth/operators.hpp"
#include "sulcdepth/phantom.hpp"
#include "sulcdepth/primitives.hpp"
#include "sulcdepth/stats.hpp"

namespace {

using namespace sulcdepth;

const TriangleMesh& bench_mesh() {
  static const TriangleMesh mesh = make_icosphere(5, 30.0);
  return mesh;
}

void BM_CotanStiffness(benchmark::State& state) {
  const auto& mesh = bench_mesh();
  for (auto _ : state) benchmark::DoNotOptimize(cotan_stiffness(mesh));
}
BENCHMARK(BM_CotanStiffness)->Unit(benchmark::kMillisecond);

void BM_MassMatrix(benchmark::State& state) {
  const auto& mesh = bench_mesh();
  for (auto _ : state) benchmark::DoNotOptimize(mass_matrix(mesh));
}
BENCHMARK(BM_MassMatrix)->Unit(benchmark::kMillisecond);

void BM_MeanCurvatureTensor(benchmark::State& state) {
  const auto& mesh = bench_mesh();
  for (auto _ : state)
    benchmark::DoNotOptimize(mean_curvature(mesh, CurvatureMethod::tensor));
}
BENCHMARK(BM_MeanCurvatureTensor)->Unit(benchmark::kMillisecond);

void BM_DpfDirect(benchmark::State& state) {
  const auto& mesh = bench_mesh();
  const CurvatureField curvature = mean_curvature(mesh, CurvatureMethod::tensor);
  SolverConfig config;
  config.backend = state.range(0) ? SolverBackend::conjugate_gradient
                                  : SolverBackend::direct_cholesky;
  for (auto _ : state)
    benchmark::DoNotOptimize(dpf(mesh, 500.0, curvature, config));
}
BENCHMARK(BM_DpfDirect)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Sulc(benchmark::State& state) {
  const TriangleMesh mesh = make_phantom_mesh({15.0, 1.5, 6, 3, 7});
  for (auto _ : state) benchmark::DoNotOptimize(sulc(mesh, 40));
}
BENCHMARK(BM_Sulc)->Unit(benchmark::kMillisecond);

void BM_ShortestPath(benchmark::State& state) {
  const auto& mesh = bench_mesh();
  const int far = static_cast<int>(mesh.vertex_count()) - 1;
  for (auto _ : state) benchmark::DoNotOptimize(shortest_path(mesh, 0, {far}));
}
BENCHMARK(BM_ShortestPath)->Unit(benchmark::kMillisecond);

void BM_Wasserstein(benchmark::State& state) {
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto n = static_cast<size_t>(state.range(0));
  std::vector<double> a(n), b(n + 13);
  for (auto& x : a) x = gauss(rng);
  for (auto& x : b) x = gauss(rng) + 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein1d(a, b));
}
BENCHMARK(BM_Wasserstein)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
