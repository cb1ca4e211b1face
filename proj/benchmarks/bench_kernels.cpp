#include <benchmark/benchmark.h>

#include "intgmres/fxp.hpp"

#include <random>
#include <vector>

namespace {

using namespace intgmres;

const QFormat q30{30};

FxVector random_fx_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> dist(-(std::int64_t{1} << 40),
                                                   std::int64_t{1} << 40);
  FxVector v(n, q30);
  for (auto& x : v.raw) x = dist(rng);
  return v;
}

std::vector<double> random_fp_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1000.0, 1000.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

void bm_fx_dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FxVector v = random_fx_vector(n, 1);
  const FxVector w = random_fx_vector(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fx_dot(v, w, 16, 0).raw);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_fp_dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> v = random_fp_vector(n, 1);
  const std::vector<double> w = random_fp_vector(n, 2);
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t l = 0; l < v.size(); ++l) acc += v[l] * w[l];
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_fx_norm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FxVector v = random_fx_vector(n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fx_norm(v, 16).raw);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_fx_axpy_sub(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  FxVector w = random_fx_vector(n, 4);
  const FxVector v = random_fx_vector(n, 5);
  const FxScalar h = encode(0.37, q30);
  for (auto _ : state) {
    fx_axpy_sub(w, h, v, 16);
    benchmark::DoNotOptimize(w.raw.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

BENCHMARK(bm_fx_dot)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(bm_fp_dot)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(bm_fx_norm)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(bm_fx_axpy_sub)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

}  // namespace

BENCHMARK_MAIN();
