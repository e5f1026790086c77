#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "abcd/rng.hpp"

namespace abcd {

using cplx = std::complex<double>;

/// Numerical tolerances shared by every module. Defaults are the contract
/// values; callers may tighten or loosen them per run.
struct Tolerances {
  double unitarity = 1e-10;    // max |U^dagger U - I|
  double determinant = 1e-8;   // |det U - 1|
  double state_norm = 1e-10;   // | ||psi|| - 1 |
  double hermiticity = 1e-10;  // density matrices
  double trace = 1e-10;        // density matrices
  double psd = -1e-8;          // smallest admissible eigenvalue
};

const Tolerances& default_tolerances();

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> diag);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] std::span<const cplx> data() const { return data_; }
  [[nodiscard]] std::span<cplx> data() { return data_; }

  [[nodiscard]] bool all_finite() const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix mat_adjoint(const ComplexMatrix& a);
/// Entry-wise complex conjugate.
ComplexMatrix mat_conj(const ComplexMatrix& a);
ComplexMatrix mat_transpose(const ComplexMatrix& a);
cplx mat_trace(const ComplexMatrix& a);
ComplexMatrix mat_scale(const ComplexMatrix& a, cplx s);
/// max_ij |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
cplx determinant(const ComplexMatrix& a);
/// max_ij |(a^dagger a - I)_ij|
double unitarity_defect(const ComplexMatrix& a);

/// y = a x
std::vector<cplx> mat_vec(const ComplexMatrix& a, std::span<const cplx> x);
/// y = a^dagger x
std::vector<cplx> adjoint_vec(const ComplexMatrix& a, std::span<const cplx> x);

/// exp(i t H) for Hermitian H, via the Hermitian eigendecomposition.
ComplexMatrix expm_i_hermitian(const ComplexMatrix& h, double t);

/// An N x N complex matrix with U^dagger U = I and det U = 1 (within the
/// configured tolerances). Immutable after construction.
class SpecialUnitary {
 public:
  /// Validates both invariants; throws std::invalid_argument on violation.
  explicit SpecialUnitary(ComplexMatrix m, const Tolerances& tol = default_tolerances());

  /// Skips validation. Only for matrices that are special unitary by
  /// construction (products, adjoints, sampler output already checked).
  static SpecialUnitary trusted(ComplexMatrix m);

  static SpecialUnitary identity(std::size_t n);

  [[nodiscard]] std::size_t n() const { return m_.rows(); }
  [[nodiscard]] const ComplexMatrix& matrix() const { return m_; }

  [[nodiscard]] SpecialUnitary adjoint() const;
  [[nodiscard]] SpecialUnitary operator*(const SpecialUnitary& rhs) const;

  friend bool operator==(const SpecialUnitary&, const SpecialUnitary&) = default;

 private:
  struct Unchecked {};
  SpecialUnitary(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Haar-distributed element of SU(n): Ginibre matrix, QR, phase fix on the
/// diagonal of R, then division by an n-th root of the determinant.
SpecialUnitary haar_su(std::size_t n, RngStream stream);
/// Same construction drawing from an existing engine.
SpecialUnitary haar_su(std::size_t n, Rng& rng);

/// Random traceless Hermitian matrix normalised so that (1/n) Tr H^2 ~ 1
/// (spectrum close to the semicircle on [-2, 2]).
ComplexMatrix random_traceless_hermitian(std::size_t n, Rng& rng);

/// exp(i epsilon H) for a random traceless Hermitian H; special unitary
/// because Tr H = 0.
SpecialUnitary perturbation_su(std::size_t n, double epsilon, RngStream stream);

/// Haar-random unit vector in C^n.
std::vector<cplx> haar_unit_vector(std::size_t n, Rng& rng);

}  // namespace abcd
