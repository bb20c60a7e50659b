#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "polyproj/polyproj.hpp"

namespace {

using namespace polyproj;

std::vector<Instance> batch(std::size_t dim, std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(random_instance(rng, dim, n));
  return out;
}

void BM_Project(benchmark::State& state) {
  const auto insts = batch(state.range(0), state.range(1), 64, 1);
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& inst = insts[k++ % insts.size()];
    benchmark::DoNotOptimize(project(inst.poly, inst.point));
  }
}
BENCHMARK(BM_Project)->ArgsProduct({{2, 5, 10}, {2, 4, 8, 12}});

void BM_Dykstra(benchmark::State& state) {
  const auto insts = batch(state.range(0), state.range(1), 64, 1);
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& inst = insts[k++ % insts.size()];
    try {
      benchmark::DoNotOptimize(dykstra(inst.poly, inst.point, 1e-10));
    } catch (const MaxItersExceeded&) {
    }
  }
}
BENCHMARK(BM_Dykstra)->ArgsProduct({{2, 5, 10}, {2, 4, 8, 12}});

// Many redundant normals push the search deep into the tiers.
void BM_ProjectWorkers(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<Instance> insts;
  for (int k = 0; k < 16; ++k) insts.push_back(random_redundant_instance(rng, 6, 16));
  SearchConfig cfg;
  cfg.workers = static_cast<unsigned>(state.range(0));
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& inst = insts[k++ % insts.size()];
    benchmark::DoNotOptimize(project(inst.poly, inst.point, cfg));
  }
}
BENCHMARK(BM_ProjectWorkers)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime();

void BM_ProjectCone(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const std::size_t n = state.range(0);
  std::vector<LatticialCone> cones;
  std::vector<Vector> points;
  for (int k = 0; k < 16; ++k) {
    cones.push_back(random_cone(rng, n));
    points.push_back(random_vector(rng, n, 2.0));
  }
  std::size_t k = 0;
  for (auto _ : state) {
    const std::size_t i = k++ % cones.size();
    benchmark::DoNotOptimize(project_cone(cones[i], points[i]));
  }
}
BENCHMARK(BM_ProjectCone)->DenseRange(2, 8, 2);

void BM_NuIn(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto inst = random_instance(rng, 8, 8);
  const GramMatrix g = build_gram(inst.poly);
  const ResidualVector w = residuals(inst.poly, inst.point);
  std::vector<std::size_t> m;
  for (std::int64_t i = 0; i < state.range(0); ++i) m.push_back(static_cast<std::size_t>(i));
  const IndexSet set(m);
  for (auto _ : state) benchmark::DoNotOptimize(nu_in(g, w, set));
}
BENCHMARK(BM_NuIn)->DenseRange(1, 6);

}  // namespace

BENCHMARK_MAIN();
