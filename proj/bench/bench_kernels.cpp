// Serial reference kernels against their OpenMP counterparts, plus the
// block-parallel Monte Carlo driver in both execution modes.

#include <benchmark/benchmark.h>

#include <vector>

#include "abcd/kernels.hpp"
#include "abcd/linalg.hpp"
#include "abcd/protocols.hpp"
#include "abcd/instances.hpp"

namespace {

using abcd::cplx;

std::vector<cplx> random_data(std::size_t count, std::uint64_t seed) {
  abcd::Rng rng(abcd::RngStream{seed, 0});
  std::vector<cplx> v(count);
  for (auto& z : v) z = rng.complex_normal();
  return v;
}

template <void (*Matmul)(std::size_t, std::size_t, std::size_t, std::span<const cplx>,
                         std::span<const cplx>, std::span<cplx>)>
void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_data(n * n, 1), b = random_data(n * n, 2);
  std::vector<cplx> c(n * n);
  for (auto _ : state) {
    Matmul(n, n, n, a, b, c);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n * n));
}

template <void (*Matvec)(std::size_t, std::size_t, std::span<const cplx>, std::span<const cplx>,
                         std::span<cplx>)>
void BM_AdjointMatvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_data(n * n, 3), x = random_data(n, 4);
  std::vector<cplx> y(n);
  for (auto _ : state) {
    Matvec(n, n, a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

BENCHMARK_TEMPLATE(BM_Matmul, abcd::kernels::serial::matmul)->RangeMultiplier(4)->Range(16, 256);
BENCHMARK_TEMPLATE(BM_Matmul, abcd::kernels::omp::matmul)->RangeMultiplier(4)->Range(16, 256);
BENCHMARK_TEMPLATE(BM_AdjointMatvec, abcd::kernels::serial::adjoint_matvec)->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK_TEMPLATE(BM_AdjointMatvec, abcd::kernels::omp::adjoint_matvec)->RangeMultiplier(4)->Range(16, 1024);

void BM_Dqc1Sampled(benchmark::State& state) {
  const auto exec = state.range(0) == 0 ? abcd::mc::Execution::Serial : abcd::mc::Execution::Parallel;
  const auto inst = abcd::gen_yes(64, abcd::GenMode::ExactInverse, 0.0, abcd::RngStream{5, 0});
  for (auto _ : state) {
    const auto est = abcd::dqc1_accept_sampled(inst, 2000, abcd::RngStream{5, 1}, false, 16, exec);
    benchmark::DoNotOptimize(est.estimate);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "omp");
}
BENCHMARK(BM_Dqc1Sampled)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
