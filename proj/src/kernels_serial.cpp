#include "abcd/kernels.hpp"
#include "matmul_tile.hpp"

#include <algorithm>

namespace abcd::kernels::serial {

void matmul(std::size_t m, std::size_t k, std::size_t n, std::span<const cplx> a,
            std::span<const cplx> b, std::span<cplx> out) {
  detail::matmul_rows(0, m, k, n, a.data(), b.data(), out.data());
}

void matvec(std::size_t m, std::size_t n, std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y) {
  for (std::size_t i = 0; i < m; ++i) {
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
  // y_j = sum_i conj(a_ij) x_i, accumulated column-wise in i order.
  auto* o = reinterpret_cast<double*>(y.data());
  std::fill(o, o + 2 * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    const auto* row = reinterpret_cast<const double*>(a.data() + i * n);
    for (std::size_t j = 0; j < n; ++j) {
      const double ar = row[2 * j];
      const double ai = row[2 * j + 1];
      o[2 * j] += ar * xr + ai * xi;
      o[2 * j + 1] += ar * xi - ai * xr;
    }
  }
}

void adjoint(std::size_t m, std::size_t n, std::span<const cplx> a, std::span<cplx> out) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = std::conj(a[i * n + j]);
}

}  // namespace abcd::kernels::serial
