#include <omp.h>

#include <algorithm>

#include "abcd/kernels.hpp"
#include "matmul_tile.hpp"

namespace abcd::kernels {

int max_threads() { return omp_get_max_threads(); }

namespace omp {

namespace {
// Below this many multiply-adds the fork/join overhead dominates.
constexpr std::size_t kParallelWork = 1 << 14;
}  // namespace

void matmul(std::size_t m, std::size_t k, std::size_t n, std::span<const cplx> a,
            std::span<const cplx> b, std::span<cplx> out) {
  // One contiguous row band per thread, so each b tile is reused across the band.
  const auto threads = static_cast<std::size_t>(omp_get_max_threads());
  const std::size_t band = std::max<std::size_t>(16, (m + threads - 1) / threads);
  const auto blocks = static_cast<std::ptrdiff_t>((m + band - 1) / band);
#pragma omp parallel for schedule(static) if (m * k * n >= kParallelWork)
  for (std::ptrdiff_t bb = 0; bb < blocks; ++bb) {
    const auto i0 = static_cast<std::size_t>(bb) * band;
    detail::matmul_rows(i0, std::min(m, i0 + band), k, n, a.data(), b.data(), out.data());
  }
}

void matvec(std::size_t m, std::size_t n, std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y) {
  const auto rows = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static) if (m * n >= kParallelWork)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double sr = 0.0, si = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const cplx aij = a[i * n + j];
      sr += aij.real() * x[j].real() - aij.imag() * x[j].imag();
      si += aij.real() * x[j].imag() + aij.imag() * x[j].real();
    }
    y[i] = {sr, si};
  }
}

void adjoint_matvec(std::size_t m, std::size_t n, std::span<const cplx> a,
                    std::span<const cplx> x, std::span<cplx> y) {
  // Parallel over output entries; each y_j keeps the serial i-order sum.
  const auto cols = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (m * n >= kParallelWork)
  for (std::ptrdiff_t jj = 0; jj < cols; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const cplx aij = a[i * n + j];
      sr += aij.real() * x[i].real() + aij.imag() * x[i].imag();
      si += aij.real() * x[i].imag() - aij.imag() * x[i].real();
    }
    y[j] = {sr, si};
  }
}

void adjoint(std::size_t m, std::size_t n, std::span<const cplx> a, std::span<cplx> out) {
  const auto rows = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static) if (m * n >= kParallelWork)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = std::conj(a[i * n + j]);
  }
}

}  // namespace omp
}  // namespace abcd::kernels
