#include <benchmark/benchmark.h>

#include <random>

#include "wavepath/engine.hpp"
#include "wavepath/hull_trees.hpp"
#include "wavepath/instance.hpp"
#include "wavepath/oracle.hpp"

using namespace wavepath;

namespace {

Instance instance_for(int m) {
  for (unsigned seed = 1;; ++seed) {
    try {
      return random_instance(seed, m, 8);
    } catch (const std::exception&) {
    }
  }
}

// Convex-position sites: spacing dominates radius and height spread, so the
// x order equals the support order and the tree's subsequence hull is exact.
std::vector<HullUnit> convex_run(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uy(0.0, 0.3), uw(0.1, 0.45);
  std::vector<HullUnit> units;
  double x = 0.0;
  for (int i = 0; i < n; ++i) {
    x += 1.1 + uy(rng);
    HullUnit u;
    u.sites = {{{x, uy(rng)}, uw(rng)}};
    u.elem_id = i;
    units.push_back(std::move(u));
  }
  return units;
}

void BM_Solve(benchmark::State& state) {
  Instance inst = instance_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    PathResult r = solve_instance(inst);
    benchmark::DoNotOptimize(r.distance);
  }
}
BENCHMARK(BM_Solve)->Arg(5)->Arg(10)->Arg(20)->Arg(40)->Arg(80)->Arg(160);

void BM_SolveFullSweep(benchmark::State& state) {
  Instance inst = instance_for(static_cast<int>(state.range(0)));
  EngineOptions opts;
  opts.full_sweep = true;
  for (auto _ : state) {
    PathResult r = solve_instance(inst, opts);
    benchmark::DoNotOptimize(r.distance);
  }
}
BENCHMARK(BM_SolveFullSweep)->Arg(10)->Arg(40)->Arg(160);

void BM_Oracle(benchmark::State& state) {
  Instance inst = instance_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    PathResult r = oracle_distance(inst);
    benchmark::DoNotOptimize(r.distance);
  }
}
BENCHMARK(BM_Oracle)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

void BM_HullBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto units = convex_run(n, 7);
  for (auto _ : state) {
    HullTree ht = HullTree::build(units, 1.0);
    benchmark::DoNotOptimize(ht.size());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_HullBuild)->Range(64, 4096)->Complexity(benchmark::oNLogN);

void BM_HullInsertErase(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto units = convex_run(n + 1, 11);
  HullUnit extra = units.back();
  units.pop_back();
  HullTree ht = HullTree::build(units, 1.0);
  for (auto _ : state) {
    ht.insert(ht.size(), extra, 1.0);
    ht.erase(ht.size() - 1, 1.0);
    benchmark::DoNotOptimize(ht.size());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_HullInsertErase)->Range(64, 4096)->Complexity();

void BM_HullSplitMerge(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  HullTree ht = HullTree::build(convex_run(n, 13), 1.0);
  for (auto _ : state) {
    HullTree right = ht.split(static_cast<std::size_t>(n / 2), 1.0);
    ht = HullTree::merge(std::move(ht), std::move(right), 1.0);
    benchmark::DoNotOptimize(ht.size());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_HullSplitMerge)->Range(64, 4096)->Complexity();

} // namespace

BENCHMARK_MAIN();
