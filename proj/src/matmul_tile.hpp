#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>

namespace abcd::kernels::detail {

// Tile sizes in complex entries: a kKTile x kNTile block of b is 256 KiB.
inline constexpr std::size_t kNTile = 64;
inline constexpr std::size_t kKTile = 256;

// Rows [i0, i1) of out = a * b (a is m x k, b is k x n, row-major). Tiling
// keeps every out(i, j) summed over p = 0, 1, ..., k-1 in order, so the result
// does not depend on the tile sizes or on how rows are split across threads.
// Explicit real arithmetic: std::complex operator* routes through the
// Annex G NaN-recovery path, which blocks vectorisation.
inline void matmul_rows(std::size_t i0, std::size_t i1, std::size_t k, std::size_t n,
                        const std::complex<double>* a, const std::complex<double>* b,
                        std::complex<double>* out) {
  std::fill(out + i0 * n, out + i1 * n, std::complex<double>{});
  for (std::size_t j0 = 0; j0 < n; j0 += kNTile) {
    const std::size_t jn = std::min(kNTile, n - j0);
    for (std::size_t p0 = 0; p0 < k; p0 += kKTile) {
      const std::size_t p1 = std::min(k, p0 + kKTile);
      for (std::size_t i = i0; i < i1; ++i) {
        auto* o = reinterpret_cast<double*>(out + i * n + j0);
        for (std::size_t p = p0; p < p1; ++p) {
          const double ar = a[i * k + p].real();
          const double ai = a[i * k + p].imag();
          const auto* br = reinterpret_cast<const double*>(b + p * n + j0);
#pragma omp simd
          for (std::size_t j = 0; j < jn; ++j) {
            const double xr = br[2 * j];
            const double xi = br[2 * j + 1];
            o[2 * j] += ar * xr - ai * xi;
            o[2 * j + 1] += ar * xi + ai * xr;
          }
        }
      }
    }
  }
}

}  // namespace abcd::kernels::detail
