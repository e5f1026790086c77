#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "abcd/repthy.hpp"

namespace abcd::su2 {

namespace {

constexpr unsigned kMaxTwoJ = 40;

double factorial(unsigned k) {
  double f = 1.0;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

// sqrt((2j - k)! k!) for the orthonormal monomial basis.
double basis_norm(unsigned two_j, unsigned k) {
  return std::sqrt(factorial(two_j - k) * factorial(k));
}

// Multiply polynomial `p` (coefficient index = power of y) by (s + t y).
void mul_linear(std::vector<cplx>& p, cplx s, cplx t) {
  p.push_back(0.0);
  for (std::size_t e = p.size() - 1; e > 0; --e) p[e] = p[e] * s + p[e - 1] * t;
  p[0] *= s;
}

void fill(SpinIrrep j, const ComplexMatrix& u, std::span<cplx> out, double scale) {
  if (u.rows() != 2 || u.cols() != 2)
    throw std::invalid_argument("wigner_d: expected a 2x2 matrix, got " +
                                std::to_string(u.rows()) + "x" + std::to_string(u.cols()));
  if (j.two_j > kMaxTwoJ) throw std::invalid_argument("wigner_d: spin too large");
  const unsigned tj = j.two_j;
  const std::size_t dim = j.dim();
  // (pi(u) p)(v) = p(u^T v): x -> u00 x + u10 y, y -> u01 x + u11 y.
  const cplx ax = u(0, 0), ay = u(1, 0);
  const cplx bx = u(0, 1), by = u(1, 1);
  std::vector<cplx> poly;
  poly.reserve(dim + 1);
  for (unsigned k = 0; k <= tj; ++k) {
    poly.assign(1, 1.0);
    for (unsigned e = 0; e < tj - k; ++e) mul_linear(poly, ax, ay);
    for (unsigned e = 0; e < k; ++e) mul_linear(poly, bx, by);
    const double inv_src = scale / basis_norm(tj, k);
    for (unsigned kp = 0; kp <= tj; ++kp) out[kp * dim + k] = poly[kp] * (basis_norm(tj, kp) * inv_src);
  }
}

}  // namespace

ComplexMatrix wigner_d(SpinIrrep j, const ComplexMatrix& u) {
  ComplexMatrix out(j.dim(), j.dim());
  fill(j, u, out.data(), 1.0);
  return out;
}

ComplexMatrix wigner_d(SpinIrrep j, const SpecialUnitary& u) { return wigner_d(j, u.matrix()); }

void normalized_coefficients(SpinIrrep j, const ComplexMatrix& u, std::span<cplx> out) {
  if (out.size() != j.dim() * j.dim())
    throw std::invalid_argument("normalized_coefficients: output size mismatch");
  fill(j, u, out, std::sqrt(static_cast<double>(j.dim())));
}

WignerCheck check_wigner(SpinIrrep j, std::size_t pairs, RngStream stream) {
  Rng rng(stream);
  WignerCheck r;
  for (std::size_t p = 0; p < pairs; ++p) {
    const SpecialUnitary g = haar_su(2, rng);
    const SpecialUnitary h = haar_su(2, rng);
    const ComplexMatrix dg = wigner_d(j, g);
    const ComplexMatrix dgh = wigner_d(j, g * h);
    r.homomorphism = std::max(r.homomorphism, max_abs_diff(mat_mul(dg, wigner_d(j, h)), dgh));
    r.unitarity = std::max(r.unitarity, unitarity_defect(dg));
  }
  return r;
}

}  // namespace abcd::su2
