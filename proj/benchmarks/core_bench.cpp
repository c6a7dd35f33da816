#include <benchmark/benchmark.h>

#include <random>

#include "adaptudf/curvature.hpp"
#include "adaptudf/extract.hpp"
#include "adaptudf/grid.hpp"
#include "adaptudf/patch.hpp"
#include "adaptudf/pipeline.hpp"
#include "adaptudf/spatial.hpp"

namespace {

using namespace adaptudf;

const PointCloud& sphere_cloud() {
  static const PointCloud cloud = [] {
    FixtureSpec spec;
    spec.count = 50'000;
    return normalize_cloud(make_fixture(spec)).first;
  }();
  return cloud;
}

std::vector<Point3> random_queries(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.55, 0.55);
  std::vector<Point3> q(n);
  for (Point3& p : q) p = {u(rng), u(rng), u(rng)};
  return q;
}

void BM_BuildIndex(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(SpatialIndex(sphere_cloud().points));
}
BENCHMARK(BM_BuildIndex)->Unit(benchmark::kMillisecond);

void BM_RadiusQuery(benchmark::State& state) {
  const SpatialIndex index(sphere_cloud().points);
  const auto queries = random_queries(4096);
  const double r = 0.018 * static_cast<double>(state.range(0)) / 100.0;
  std::vector<std::uint32_t> out;
  std::size_t i = 0;
  for (auto _ : state) {
    index.radius_query(queries[i++ % queries.size()], r, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_RadiusQuery)->Arg(67)->Arg(100)->Arg(135);

void BM_Nearest(benchmark::State& state) {
  const SpatialIndex index(sphere_cloud().points);
  const auto queries = random_queries(4096);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(index.nearest(queries[i++ % queries.size()]));
}
BENCHMARK(BM_Nearest);

void BM_CurvatureField(benchmark::State& state) {
  const SpatialIndex index(sphere_cloud().points);
  const auto queries = coarse_queries(LatticeSpec{static_cast<int>(state.range(0)), 3});
  std::vector<Point3> positions;
  for (const auto& q : queries) positions.push_back(q.position);
  for (auto _ : state) benchmark::DoNotOptimize(curvature_field(sphere_cloud(), index, positions, 0.018));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * positions.size()));
}
BENCHMARK(BM_CurvatureField)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MakePatch(benchmark::State& state) {
  const SpatialIndex index(sphere_cloud().points);
  const auto queries = random_queries(4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_patch(index, sphere_cloud(), queries[i % queries.size()], 0.018, 0.0,
                                        ResamplePolicy{}, i));
    ++i;
  }
}
BENCHMARK(BM_MakePatch);

void BM_HierarchicalFill(benchmark::State& state) {
  const LatticeSpec spec{static_cast<int>(state.range(0)), 3};
  for (auto _ : state) {
    state.PauseTiming();
    AdaptiveGrid grid(spec);
    for (std::size_t c = 0; c < spec.coarse_count(); ++c) grid.set_value(spec.coarse_to_fine(c), 1.0);
    state.ResumeTiming();
    hierarchical_fill(grid);
    benchmark::DoNotOptimize(grid.values().data());
  }
}
BENCHMARK(BM_HierarchicalFill)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MarchingCubes(benchmark::State& state) {
  const LatticeSpec spec{static_cast<int>(state.range(0)), 3};
  std::vector<double> field(spec.fine_count());
  for (std::size_t id = 0; id < field.size(); ++id) {
    field[id] = std::abs(norm(spec.fine_position(spec.fine_index(id))) - 0.4);
  }
  const IsoSpec iso = IsoSpec::half_fine_cell(spec);
  for (auto _ : state) benchmark::DoNotOptimize(marching_cubes(field, spec, iso));
}
BENCHMARK(BM_MarchingCubes)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
