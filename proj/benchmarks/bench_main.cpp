#include <benchmark/benchmark.h>

#include <vector>

#include "invroot/matgen.hpp"
#include "invroot/oracle.hpp"
#include "invroot/random.hpp"
#include "invroot/solver.hpp"

using namespace invroot;

namespace {

std::vector<double> random_values(std::size_t count) {
  SplitMix64 rng(1);
  std::vector<double> v(count);
  for (double& x : v) x = (rng.uniform() - 0.5) * 8.0;
  return v;
}

void BM_QuantizeHalf(benchmark::State& state) {
  const auto values = random_values(4096);
  const auto h = FloatFormat::half();
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : values) acc += quantize(x, h);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(values.size()));
}
BENCHMARK(BM_QuantizeHalf);

void BM_ToFixed(benchmark::State& state) {
  const auto values = random_values(4096);
  const FixedFormat f(13, 18);
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : values) acc += to_fixed(x, f);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(values.size()));
}
BENCHMARK(BM_ToFixed);

void matmul_bench(benchmark::State& state, const char* model_name) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = gen_overlap({.n = n, .target_density = 0.25, .seed = 1});
  const auto model = ArithmeticModel::parse(model_name);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, a, model));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK_CAPTURE(matmul_bench, exact, "exact")->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(matmul_bench, half, "half")->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(matmul_bench, fixed_f18, "fixed:f18")->Arg(64)->Arg(128);

void iterate_bench(benchmark::State& state, const char* model_name) {
  const Matrix a = gen_overlap({.n = 128, .target_density = 0.25, .seed = 7});
  const auto model = ArithmeticModel::parse(model_name);
  const Matrix c = init_c0(a);
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iterate_once(c, a, p, model, model));
}
BENCHMARK_CAPTURE(iterate_bench, exact, "exact")->Arg(1)->Arg(2)->Arg(4);
BENCHMARK_CAPTURE(iterate_bench, float_m10, "float:m10")->Arg(2);

void BM_JacobiEigen(benchmark::State& state) {
  const Matrix a = gen_overlap({.n = static_cast<std::size_t>(state.range(0)), .target_density = 0.25, .seed = 3});
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(a));
}
BENCHMARK(BM_JacobiEigen)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
