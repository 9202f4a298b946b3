#include <benchmark/benchmark.h>

#include <random>

#include "altspec/iis.hpp"
#include "altspec/recovery.hpp"

namespace {

altspec::SymMatrix random_sym(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  altspec::SymMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, gauss(rng));
  return a;
}

void BM_EigenSym(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  altspec::SymMatrix a = random_sym(n, 7);
  for (auto _ : state) {
    auto ed = altspec::eigen_sym(a);
    benchmark::DoNotOptimize(ed.values);
  }
}
BENCHMARK(BM_EigenSym)->Arg(20)->Arg(50)->Arg(100);

void BM_SolveAltPair(benchmark::State& state) {
  altspec::Pencil p = altspec::gen_blocksdp(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    auto res = altspec::solve_alt_pair(p);
    benchmark::DoNotOptimize(res.etaOpt);
  }
}
BENCHMARK(BM_SolveAltPair)->Arg(0)->Arg(1);

void BM_GreedyIIS(benchmark::State& state) {
  altspec::Pencil p = altspec::gen_blocklinear();
  for (auto _ : state) {
    auto res = altspec::greedy_iis(p);
    benchmark::DoNotOptimize(res.blocks);
  }
}
BENCHMARK(BM_GreedyIIS);

}  // namespace

BENCHMARK_MAIN();
