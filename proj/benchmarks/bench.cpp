#include <benchmark/benchmark.h>

#include <random>

#include "toda/fuchsian.hpp"
#include "toda/verify.hpp"

using namespace toda;

namespace {

TruncatedSeries random_series(int order, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  std::vector<complex> c{1.0};
  for (int k = 1; k <= order; ++k) c.emplace_back(d(rng), d(rng));
  return TruncatedSeries::polynomial(c, order);
}

SeedData veronese_like(int order) {
  std::vector<TruncatedSeries> g{TruncatedSeries::polynomial(std::vector<complex>{1, 0.1}, order),
                                 TruncatedSeries::polynomial(std::vector<complex>{1, complex(0, 0.2)}, order),
                                 TruncatedSeries::polynomial(std::vector<complex>{0.7, -0.1, 0.05}, order)};
  return normalize(make_seed(make_exponent_data(2, std::vector<double>{0.0, 1.0}), std::move(g)));
}

void series_multiply(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const auto a = random_series(order, 1);
  const auto b = random_series(order, 2);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(series_multiply)->Arg(16)->Arg(64)->Arg(256);

void series_power(benchmark::State& state) {
  const auto a = random_series(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(power(a, -1.0 / 3.0));
}
BENCHMARK(series_power)->Arg(16)->Arg(64)->Arg(256);

void wronskian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> betas;
  std::vector<TruncatedSeries> g;
  for (int i = 0; i <= n; ++i) {
    betas.push_back(1.3 * i);
    g.push_back(random_series(24, 10 + static_cast<unsigned>(i)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(reduced_wronskian(betas, g));
}
BENCHMARK(wronskian)->DenseRange(1, 4);

void u_evaluation(benchmark::State& state) {
  const CanonicalCurve curve(veronese_like(30));
  const complex z(0.3, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(curve.u_value(1, z));
}
BENCHMARK(u_evaluation);

void fuchsian_reconstruction(benchmark::State& state) {
  const auto seed = veronese_like(30);
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(seed));
}
BENCHMARK(fuchsian_reconstruction);

}  // namespace

BENCHMARK_MAIN();
