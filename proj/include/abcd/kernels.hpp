#pragma once

// Dense complex kernels in two flavours: `serial` is the reference
// implementation kept for testing, `omp` is the OpenMP-parallel version used
// by the library. Both use identical per-element accumulation order, so their
// outputs agree bit-for-bit.
//
// Matrices are row-major; shapes are passed explicitly.

#include <complex>
#include <cstddef>
#include <span>

namespace abcd::kernels {

using cplx = std::complex<double>;

namespace serial {
void matmul(std::size_t m, std::size_t k, std::size_t n, std::span<const cplx> a,
            std::span<const cplx> b, std::span<cplx> out);
void matvec(std::size_t m, std::size_t n, std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y);
/// y = A^dagger x for an m x n matrix A (x has m entries, y has n).
void adjoint_matvec(std::size_t m, std::size_t n, std::span<const cplx> a,
                    std::span<const cplx> x, std::span<cplx> y);
void adjoint(std::size_t m, std::size_t n, std::span<const cplx> a, std::span<cplx> out);
}  // namespace serial

namespace omp {
void matmul(std::size_t m, std::size_t k, std::size_t n, std::span<const cplx> a,
            std::span<const cplx> b, std::span<cplx> out);
void matvec(std::size_t m, std::size_t n, std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y);
void adjoint_matvec(std::size_t m, std::size_t n, std::span<const cplx> a,
                    std::span<const cplx> x, std::span<cplx> y);
void adjoint(std::size_t m, std::size_t n, std::span<const cplx> a, std::span<cplx> out);
}  // namespace omp

/// Number of OpenMP threads the omp kernels will use.
int max_threads();

}  // namespace abcd::kernels
