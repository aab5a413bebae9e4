// Serial reference vs OpenMP for each kernel. Arguments are problem sizes.

#include "btq/geometry.hpp"
#include "btq/kernels.hpp"
#include "btq/quantize.hpp"
#include "btq/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace btq;

std::vector<cplx> probe_grid(int n) {
  std::vector<cplx> z;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z.emplace_back(-1.2 + 2.4 * i / (n - 1), -1.2 + 2.4 * j / (n - 1));
  return z;
}

template <auto Fn>
void ginibre(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  CMatrix m(dim, dim);
  for (auto _ : state) {
    Fn(m, 7);
    benchmark::DoNotOptimize(m.data());
  }
  state.SetItemsProcessed(state.iterations() * dim * dim);
}

template <auto Fn>
void sphere_toeplitz(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto terms = sphere_terms(*named_symbol("sphere-fig2"), N);
  CMatrix m(N + 1, N + 1);
  for (auto _ : state) {
    Fn(m, N, terms);
    benchmark::DoNotOptimize(m.data());
  }
}

template <auto Fn>
void det_probes(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const CMatrix m = quantize(*named_symbol("sphere-fig3"), N).entries;
  const auto z = probe_grid(6);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(m, z));
}

template <auto Fn>
void atoms(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<cplx> a;
  CounterRng rng(3, Stream::Test);
  for (int i = 0; i < n; ++i) a.push_back(rng.complex_gaussian(static_cast<std::uint64_t>(i)));
  const auto z = probe_grid(41);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, z));
}

template <auto Fn>
void quadrature_potential(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const auto f = *named_symbol("sphere-fig3");
  const auto grid = liouville_quadrature(make_phase_space(f.kind()), res);
  const auto values = sample_principal(f, grid);
  const auto z = probe_grid(21);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(values, grid.weights, z));
}

template <auto Fn>
void smin(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const CMatrix base = CMatrix::Zero(dim, dim);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(base, 1.0, 11, 64));
}

template <auto Fn>
void sublevel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<cplx> v;
  for (int i = 0; i < n; ++i) v.push_back(evaluate_symbol(*named_symbol("sphere-fig3"), uniform_point(SpaceKind::SphereCP1, 5, i)));
  const auto z = probe_grid(5);
  const std::vector<double> t{1e-3, 1e-2, 1e-1};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(v, z, t));
}

} // namespace

BENCHMARK(ginibre<kernels::serial::fill_ginibre>)->Arg(256)->Arg(1024);
BENCHMARK(ginibre<kernels::omp::fill_ginibre>)->Arg(256)->Arg(1024);
BENCHMARK(sphere_toeplitz<kernels::serial::fill_sphere_toeplitz>)->Arg(300)->Arg(1000);
BENCHMARK(sphere_toeplitz<kernels::omp::fill_sphere_toeplitz>)->Arg(300)->Arg(1000);
BENCHMARK(det_probes<kernels::serial::log_abs_det_probes>)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(det_probes<kernels::omp::log_abs_det_probes>)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(atoms<kernels::serial::log_potential_atoms>)->Arg(301)->Arg(2001);
BENCHMARK(atoms<kernels::omp::log_potential_atoms>)->Arg(301)->Arg(2001);
BENCHMARK(quadrature_potential<kernels::serial::quadrature_log_potential>)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(quadrature_potential<kernels::omp::quadrature_log_potential>)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(smin<kernels::serial::perturbed_smin>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(smin<kernels::omp::perturbed_smin>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(sublevel<kernels::serial::sublevel_counts>)->Arg(20000);
BENCHMARK(sublevel<kernels::omp::sublevel_counts>)->Arg(20000);

BENCHMARK_MAIN();
