// Serial reference vs OpenMP kernels, plus one full nonlinearity evaluation.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "kbs/evolution.hpp"
#include "kbs/kernels.hpp"
#include "kbs/random.hpp"

namespace {

using kbs::Complex;

std::vector<double> reals(std::size_t n, std::uint64_t seed) {
  kbs::Stream rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

std::vector<Complex> complexes(std::size_t n, std::uint64_t seed) {
  kbs::Stream rng(seed);
  std::vector<Complex> v(n);
  for (auto& z : v) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return v;
}

template <bool Serial>
void BM_propagate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto in = complexes(n, 1);
  auto omega = complexes(n, 2);
  for (auto& w : omega) w = {w.real() * 100.0, 0.0};
  std::vector<Complex> out(n);
  for (auto _ : state) {
    if constexpr (Serial)
      kbs::kernels::serial::propagate(in, omega, 0.37, out);
    else
      kbs::kernels::propagate(in, omega, 0.37, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <bool Serial>
void BM_flux(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = reals(n, 3), ux = reals(n, 4);
  const std::vector<double> b = {1.0, 0.5, 0.25};
  std::vector<double> out(n);
  for (auto _ : state) {
    if constexpr (Serial)
      kbs::kernels::serial::polynomial_flux(u, ux, b, out);
    else
      kbs::kernels::polynomial_flux(u, ux, b, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <bool Serial>
void BM_power_sum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = complexes(n, 5);
  auto m = reals(n, 6);
  for (auto& x : m) x = std::abs(x);
  for (auto _ : state) {
    double r = Serial ? kbs::kernels::serial::weighted_power_sum(c, m)
                      : kbs::kernels::weighted_power_sum(c, m);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_nonlinearity(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto grid = kbs::make_grid(100.0, n);
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = std::exp(-grid->nodes()[k] * grid->nodes()[k]);
  const auto u = kbs::transform(s, grid);
  const kbs::ModelParams p = kbs::ModelParams::benjamin(1.0, {1.0, 0.5});
  for (auto _ : state) {
    auto out = kbs::nonlinearity(u, p, kbs::Dealias::two_thirds());
    benchmark::DoNotOptimize(out.coeffs().data());
  }
}

}  // namespace

BENCHMARK(BM_propagate<true>)->Name("propagate/serial")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_propagate<false>)->Name("propagate/omp")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_flux<true>)->Name("polynomial_flux/serial")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_flux<false>)->Name("polynomial_flux/omp")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_power_sum<true>)->Name("weighted_power_sum/serial")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_power_sum<false>)->Name("weighted_power_sum/omp")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_nonlinearity)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

BENCHMARK_MAIN();
