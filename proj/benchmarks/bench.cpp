// Microbenchmarks for the hot paths: basis evaluation, Gram assembly,
// banded solves, and the Lebesgue-constant scan.

#include <benchmark/benchmark.h>

#include <splineproj/analysis.hpp>
#include <splineproj/bspline.hpp>
#include <splineproj/gram.hpp>
#include <splineproj/knots.hpp>
#include <splineproj/projector.hpp>
#include <splineproj/rng.hpp>

#include <cmath>
#include <vector>

using namespace splineproj;

namespace {

BSplineBasis make_basis(int order, int n) {
  return BSplineBasis(uniform_clamped_knots(order, n));
}

void bm_basis_eval(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  BSplineBasis basis = make_basis(k, n);
  LocalEvaluator ev(basis);
  double x = 0.0;
  const double step = 1.0 / 4096.0;
  for (auto _ : state) {
    ActiveValues av = ev(x);
    benchmark::DoNotOptimize(av.values[0]);
    x += step;
    if (x >= 1.0) x = 0.0;
  }
}

void bm_gram_assembly(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  BSplineBasis basis = make_basis(k, n);
  for (auto _ : state) {
    BandedSymmetricMatrix g = gram_matrix(basis);
    benchmark::DoNotOptimize(g.get(0, 0));
  }
}

void bm_banded_solve(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  BSplineBasis basis = make_basis(k, n);
  BandedSymmetricMatrix g = gram_matrix(basis);
  std::vector<double> rhs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rhs[static_cast<std::size_t>(i)] = std::sin(0.1 * i);
  for (auto _ : state) {
    std::vector<double> x = cholesky_solve(g, rhs);
    benchmark::DoNotOptimize(x[0]);
  }
}

void bm_cyclic_solve(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  PeriodicBSplineBasis basis(uniform_periodic_knots(k, n));
  CyclicBandedMatrix g = periodic_gram_matrix(basis);
  std::vector<double> rhs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rhs[static_cast<std::size_t>(i)] = std::sin(0.1 * i);
  for (auto _ : state) {
    std::vector<double> x = cholesky_solve(g, rhs);
    benchmark::DoNotOptimize(x[0]);
  }
}

void bm_lebesgue(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  DualBasis dual(make_basis(k, n));
  for (auto _ : state) {
    double l = lebesgue_constant(dual, 8);
    benchmark::DoNotOptimize(l);
  }
}

BENCHMARK(bm_basis_eval)->Args({3, 64})->Args({5, 256});
BENCHMARK(bm_gram_assembly)->Args({3, 64})->Args({5, 256});
BENCHMARK(bm_banded_solve)->Args({3, 64})->Args({5, 256})->Args({3, 1024});
BENCHMARK(bm_cyclic_solve)->Args({3, 64})->Args({3, 1024});
BENCHMARK(bm_lebesgue)->Args({3, 32})->Args({4, 64});

}  // namespace

BENCHMARK_MAIN();
