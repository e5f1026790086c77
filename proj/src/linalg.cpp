#include "abcd/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "abcd/kernels.hpp"

namespace abcd {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> as_eigen(const ComplexMatrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

ComplexMatrix from_eigen(const RowMat& m) {
  ComplexMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  std::copy(m.data(), m.data() + m.size(), out.data().begin());
  return out;
}

void require_square(const ComplexMatrix& a, const char* what) {
  if (!a.is_square())
    throw ShapeError(std::string(what) + ": expected a square matrix, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

}  // namespace

const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw ShapeError("ComplexMatrix: " + std::to_string(data_.size()) + " entries for a " +
                     std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  if (!all_finite()) throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  ComplexMatrix out(a.rows(), b.cols());
  kernels::omp::matmul(a.rows(), a.cols(), b.cols(), a.data(), b.data(), out.data());
  return out;
}

ComplexMatrix mat_adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  kernels::omp::adjoint(a.rows(), a.cols(), a.data(), out.data());
  return out;
}

ComplexMatrix mat_conj(const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  std::transform(a.data().begin(), a.data().end(), out.data().begin(),
                 [](const cplx& z) { return std::conj(z); });
  return out;
}

ComplexMatrix mat_transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

cplx mat_trace(const ComplexMatrix& a) {
  require_square(a, "mat_trace");
  cplx t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

ComplexMatrix mat_scale(const ComplexMatrix& a, cplx s) {
  ComplexMatrix out(a.rows(), a.cols());
  std::transform(a.data().begin(), a.data().end(), out.data().begin(),
                 [s](const cplx& z) { return z * s; });
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("max_abs_diff: shape mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

cplx determinant(const ComplexMatrix& a) {
  require_square(a, "determinant");
  if (a.rows() == 0) return 1.0;
  return RowMat(as_eigen(a)).partialPivLu().determinant();
}

double unitarity_defect(const ComplexMatrix& a) {
  require_square(a, "unitarity_defect");
  return max_abs_diff(mat_mul(mat_adjoint(a), a), ComplexMatrix::identity(a.rows()));
}

std::vector<cplx> mat_vec(const ComplexMatrix& a, std::span<const cplx> x) {
  if (x.size() != a.cols()) throw ShapeError("mat_vec: vector length mismatch");
  std::vector<cplx> y(a.rows());
  kernels::omp::matvec(a.rows(), a.cols(), a.data(), x, y);
  return y;
}

std::vector<cplx> adjoint_vec(const ComplexMatrix& a, std::span<const cplx> x) {
  if (x.size() != a.rows()) throw ShapeError("adjoint_vec: vector length mismatch");
  std::vector<cplx> y(a.cols());
  kernels::omp::adjoint_matvec(a.rows(), a.cols(), a.data(), x, y);
  return y;
}

ComplexMatrix expm_i_hermitian(const ComplexMatrix& h, double t) {
  require_square(h, "expm_i_hermitian");
  const std::size_t n = h.rows();
  if (n == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(Eigen::MatrixXcd(as_eigen(h)));
  if (eig.info() != Eigen::Success) throw std::runtime_error("expm_i_hermitian: eigensolver failed");
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  Eigen::VectorXcd phases(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases(k) = std::polar(1.0, t * eig.eigenvalues()(k));
  const RowMat out = v * phases.asDiagonal() * v.adjoint();
  return from_eigen(out);
}

SpecialUnitary::SpecialUnitary(ComplexMatrix m, const Tolerances& tol) : m_(std::move(m)) {
  if (!m_.is_square() || m_.rows() == 0)
    throw std::invalid_argument("SpecialUnitary: expected a non-empty square matrix");
  if (!m_.all_finite()) throw std::invalid_argument("SpecialUnitary: non-finite entry");
  const double defect = unitarity_defect(m_);
  if (defect > tol.unitarity)
    throw std::invalid_argument("SpecialUnitary: ||U^dagger U - I||_max = " +
                                std::to_string(defect) + " exceeds tolerance");
  const double det_err = std::abs(determinant(m_) - 1.0);
  if (det_err > tol.determinant)
    throw std::invalid_argument("SpecialUnitary: |det U - 1| = " + std::to_string(det_err) +
                                " exceeds tolerance");
}

SpecialUnitary SpecialUnitary::trusted(ComplexMatrix m) { return {std::move(m), Unchecked{}}; }

SpecialUnitary SpecialUnitary::identity(std::size_t n) {
  return trusted(ComplexMatrix::identity(n));
}

SpecialUnitary SpecialUnitary::adjoint() const { return trusted(mat_adjoint(m_)); }

SpecialUnitary SpecialUnitary::operator*(const SpecialUnitary& rhs) const {
  return trusted(mat_mul(m_, rhs.m_));
}

SpecialUnitary haar_su(std::size_t n, RngStream stream) {
  Rng rng(stream);
  return haar_su(n, rng);
}

SpecialUnitary haar_su(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("haar_su: n must be at least 1");
  if (n == 1) return SpecialUnitary::identity(1);
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd g(dim, dim);
  // Row-major draw order, so the sample does not depend on Eigen's storage.
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = rng.complex_normal();

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& packed = qr.matrixQR();
  // Q uses conj(tau): det(I - conj(tau) v v^dagger) = 1 - conj(tau) |v|^2, v = (1, essential).
  cplx det = 1.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const cplx rkk = packed(k, k);
    const double mag = std::abs(rkk);
    const cplx phase = mag > 0.0 ? rkk / mag : cplx{1.0};
    q.col(k) *= phase;
    const double v2 = 1.0 + packed.col(k).tail(dim - k - 1).squaredNorm();
    det *= (1.0 - std::conj(qr.hCoeffs()(k)) * v2) * phase;
  }
  const cplx root = std::polar(1.0, std::arg(det) / static_cast<double>(n));
  q /= root;
  return SpecialUnitary::trusted(from_eigen(q));
}

ComplexMatrix random_traceless_hermitian(std::size_t n, Rng& rng) {
  ComplexMatrix g(n, n);
  for (auto& z : g.data()) z = rng.complex_normal();
  // (G + G^dagger)/2 has E|H_ij|^2 = 1; rescale to (1/n) Tr H^2 ~ 1.
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * scale * (g(i, j) + std::conj(g(j, i)));
  const double shift = mat_trace(h).real() / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) h(i, i) = {h(i, i).real() - shift, 0.0};
  return h;
}

SpecialUnitary perturbation_su(std::size_t n, double epsilon, RngStream stream) {
  if (n == 0) throw std::invalid_argument("perturbation_su: n must be at least 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("perturbation_su: epsilon must be >= 0");
  if (epsilon == 0.0 || n == 1) return SpecialUnitary::identity(n);
  Rng rng(stream);
  return SpecialUnitary::trusted(expm_i_hermitian(random_traceless_hermitian(n, rng), epsilon));
}

std::vector<cplx> haar_unit_vector(std::size_t n, Rng& rng) {
  std::vector<cplx> v(n);
  double norm2 = 0.0;
  for (auto& z : v) {
    z = rng.complex_normal();
    norm2 += std::norm(z);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& z : v) z *= inv;
  return v;
}

}  // namespace abcd
