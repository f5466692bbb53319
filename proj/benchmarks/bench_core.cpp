#include <benchmark/benchmark.h>

#include <random>

#include "linf/param_cad.hpp"
#include "linf/subres.hpp"
#include "test_util.hpp"

using namespace linf;

namespace {

const char* kRatio = "((s/w0)^2+2*xi*(s/w0)+1)/((s/(r*w0))^2+2*xi*(s/(r*w0))+1)";
const char* kRatioConstraints = "w0 > 0, 0 < xi <= 1, r > 0, r != 1";

void BM_BivariateResultant(benchmark::State& state) {
  auto ring = make_ring({"x", "y"});
  std::mt19937_64 rng(11);
  int deg = int(state.range(0));
  auto p = testing::random_poly(rng, ring, deg, 2 * deg, 32);
  auto q = testing::random_poly(rng, ring, deg, 2 * deg, 32);
  for (auto _ : state) benchmark::DoNotOptimize(resultant(p, q, "x"));
}
BENCHMARK(BM_BivariateResultant)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Isolate(benchmark::State& state) {
  auto ring = make_ring({"x"});
  std::mt19937_64 rng(5);
  auto f = testing::random_univariate(rng, ring, int(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(isolate(f));
}
BENCHMARK(BM_Isolate)->Arg(6)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

void BM_SturmHabichtCount(benchmark::State& state) {
  auto ring = make_ring({"x"});
  std::mt19937_64 rng(9);
  auto f = testing::random_univariate(rng, ring, int(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(count_real_roots(f));
}
BENCHMARK(BM_SturmHabichtCount)->Arg(6)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_NormRandomStable(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<TransferMatrix> systems;
  for (int i = 0; i < 8; ++i) systems.push_back(testing::random_stable_scalar(rng, int(state.range(0))));
  for (auto _ : state) {
    for (const auto& g : systems) benchmark::DoNotOptimize(linf_norm(g));
  }
}
BENCHMARK(BM_NormRandomStable)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Algorithm1SecondOrderRatio(benchmark::State& state) {
  CurveData c = build_curve(parse_transfer(kRatio));
  auto sp = parse_constraints(kRatioConstraints, c.ring);
  Algorithm1Options opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(algorithm1(c, sp, opt));
}
BENCHMARK(BM_Algorithm1SecondOrderRatio)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
