#include "abcd/oracle_sim.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "abcd/protocols.hpp"

namespace abcd {

namespace {

constexpr std::size_t kNoControl = std::numeric_limits<std::size_t>::max();

std::size_t bit_of(std::size_t num_qubits, std::size_t qubit) { return num_qubits - 1 - qubit; }

void check_target(std::size_t num_qubits, const ComplexMatrix& u, std::size_t control,
                  QubitSpan target) {
  if (target.count == 0 || target.first + target.count > num_qubits)
    throw std::invalid_argument("apply: target span outside the register");
  if (!u.is_square() || u.rows() != (std::size_t{1} << target.count))
    throw std::invalid_argument("apply: gate is " + std::to_string(u.rows()) + "x" +
                                std::to_string(u.cols()) + ", target span needs dimension " +
                                std::to_string(std::size_t{1} << target.count));
  if (control != kNoControl) {
    if (control >= num_qubits) throw std::invalid_argument("apply: control qubit out of range");
    if (control >= target.first && control < target.first + target.count)
      throw std::invalid_argument("apply: control qubit inside the target span");
  }
}

// Core kernel: amplitudes `amp` (length 2^m, stride `stride` between
// consecutive logical entries) get U applied on the target bits wherever the
// control bit equals `value`.
void apply_on(cplx* amp, std::size_t stride, std::size_t m, const ComplexMatrix& u,
              std::size_t control, int value, QubitSpan target) {
  const std::size_t dim = std::size_t{1} << m;
  const std::size_t shift = m - target.first - target.count;
  const std::size_t tdim = std::size_t{1} << target.count;
  const std::size_t tmask = (tdim - 1) << shift;
  const std::size_t cbit =
      control == kNoControl ? 0 : std::size_t{1} << bit_of(m, control);
  std::vector<cplx> x(tdim), y(tdim);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & tmask) continue;
    if (control != kNoControl && (((base & cbit) != 0) != (value != 0))) continue;
    for (std::size_t j = 0; j < tdim; ++j) x[j] = amp[(base | (j << shift)) * stride];
    for (std::size_t r = 0; r < tdim; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < tdim; ++c) acc += u(r, c) * x[c];
      y[r] = acc;
    }
    for (std::size_t j = 0; j < tdim; ++j) amp[(base | (j << shift)) * stride] = y[j];
  }
}

// rho -> G rho G^dagger with G the (controlled) gate: apply G to every column,
// then to every column of the adjoint, then take the adjoint back.
void conjugate_density(DensityMatrix& s, const ComplexMatrix& u, std::size_t control, int value,
                       QubitSpan target) {
  const std::size_t dim = s.dim();
  for (std::size_t col = 0; col < dim; ++col)
    apply_on(s.rho.data().data() + col, dim, s.num_qubits, u, control, value, target);
  ComplexMatrix t = mat_adjoint(s.rho);
  for (std::size_t col = 0; col < dim; ++col)
    apply_on(t.data().data() + col, dim, s.num_qubits, u, control, value, target);
  s.rho = mat_adjoint(t);
}

void require_power_of_two(std::size_t n, const char* who) {
  if (n < 2 || !std::has_single_bit(n))
    throw std::invalid_argument(std::string(who) + ": n must be a power of two >= 2, got " +
                                std::to_string(n));
}

}  // namespace

StateVector StateVector::basis(std::size_t num_qubits, std::size_t index) {
  StateVector s{num_qubits, std::vector<cplx>(std::size_t{1} << num_qubits)};
  s.amplitudes.at(index) = 1.0;
  return s;
}

double StateVector::norm() const {
  double n2 = 0.0;
  for (const cplx& z : amplitudes) n2 += std::norm(z);
  return std::sqrt(n2);
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const std::size_t dim = psi.dim();
  DensityMatrix d{psi.num_qubits, ComplexMatrix(dim, dim)};
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      d.rho(i, j) = psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
  return d;
}

void DensityMatrix::validate(const Tolerances& tol, bool check_psd) const {
  if (rho.rows() != (std::size_t{1} << num_qubits) || !rho.is_square())
    throw std::domain_error("DensityMatrix: shape does not match qubit count");
  const double herm = max_abs_diff(rho, mat_adjoint(rho));
  if (herm > tol.hermiticity)
    throw std::domain_error("DensityMatrix: not Hermitian (defect " + std::to_string(herm) + ")");
  const double tr_err = std::abs(mat_trace(rho) - 1.0);
  if (tr_err > tol.trace)
    throw std::domain_error("DensityMatrix: trace differs from 1 by " + std::to_string(tr_err));
  if (check_psd) {
    const auto dim = static_cast<Eigen::Index>(rho.rows());
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j)
        m(i, j) = rho(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    if (lo < tol.psd)
      throw std::domain_error("DensityMatrix: eigenvalue " + std::to_string(lo) +
                              " below PSD tolerance");
  }
}

ComplexMatrix hadamard_matrix() {
  const double h = 1.0 / std::sqrt(2.0);
  return ComplexMatrix(2, 2, {h, h, h, -h});
}

void apply_controlled(StateVector& s, const ComplexMatrix& u, std::size_t control,
                      int control_value, QubitSpan target) {
  check_target(s.num_qubits, u, control, target);
  apply_on(s.amplitudes.data(), 1, s.num_qubits, u, control, control_value, target);
}

void apply_controlled(DensityMatrix& s, const ComplexMatrix& u, std::size_t control,
                      int control_value, QubitSpan target) {
  check_target(s.num_qubits, u, control, target);
  conjugate_density(s, u, control, control_value, target);
}

void apply_gate(StateVector& s, const ComplexMatrix& u, QubitSpan target) {
  check_target(s.num_qubits, u, kNoControl, target);
  apply_on(s.amplitudes.data(), 1, s.num_qubits, u, kNoControl, 0, target);
}

void apply_gate(DensityMatrix& s, const ComplexMatrix& u, QubitSpan target) {
  check_target(s.num_qubits, u, kNoControl, target);
  conjugate_density(s, u, kNoControl, 0, target);
}

void apply_hadamard(StateVector& s, std::size_t qubit) {
  apply_gate(s, hadamard_matrix(), {qubit, 1});
}

void apply_hadamard(DensityMatrix& s, std::size_t qubit) {
  apply_gate(s, hadamard_matrix(), {qubit, 1});
}

void apply_controlled_swap(StateVector& s, std::size_t control, QubitSpan a, QubitSpan b) {
  const std::size_t m = s.num_qubits;
  if (a.count != b.count || a.count == 0)
    throw std::invalid_argument("apply_controlled_swap: registers must have equal nonzero width");
  if (a.first + a.count > m || b.first + b.count > m || control >= m)
    throw std::invalid_argument("apply_controlled_swap: qubit out of range");
  const bool overlap = a.first < b.first + b.count && b.first < a.first + a.count;
  const auto inside = [](std::size_t q, QubitSpan r) { return q >= r.first && q < r.first + r.count; };
  if (overlap || inside(control, a) || inside(control, b))
    throw std::invalid_argument("apply_controlled_swap: control and registers must be disjoint");

  const std::size_t width_mask = (std::size_t{1} << a.count) - 1;
  const std::size_t sa = m - a.first - a.count;
  const std::size_t sb = m - b.first - b.count;
  const std::size_t cbit = std::size_t{1} << bit_of(m, control);
  for (std::size_t idx = 0; idx < s.dim(); ++idx) {
    if (!(idx & cbit)) continue;
    const std::size_t va = (idx >> sa) & width_mask;
    const std::size_t vb = (idx >> sb) & width_mask;
    if (va >= vb) continue;  // each unordered pair swapped once
    const std::size_t partner =
        (idx & ~(width_mask << sa) & ~(width_mask << sb)) | (vb << sa) | (va << sb);
    std::swap(s.amplitudes[idx], s.amplitudes[partner]);
  }
}

namespace {
std::size_t zero_mask(std::size_t m, std::span<const std::size_t> qubits) {
  std::size_t mask = 0;
  for (std::size_t q : qubits) {
    if (q >= m) throw std::invalid_argument("probability_zero: qubit out of range");
    mask |= std::size_t{1} << bit_of(m, q);
  }
  return mask;
}
}  // namespace

double probability_zero(const StateVector& s, std::span<const std::size_t> qubits) {
  const std::size_t mask = zero_mask(s.num_qubits, qubits);
  double p = 0.0;
  for (std::size_t idx = 0; idx < s.dim(); ++idx)
    if (!(idx & mask)) p += std::norm(s.amplitudes[idx]);
  return p;
}

double probability_zero(const DensityMatrix& s, std::span<const std::size_t> qubits) {
  const std::size_t mask = zero_mask(s.num_qubits, qubits);
  double p = 0.0;
  for (std::size_t idx = 0; idx < s.dim(); ++idx)
    if (!(idx & mask)) p += s.rho(idx, idx).real();
  return p;
}

double dqc1_circuit_sim(const AbcdInstance& inst, const OracleCaps& caps) {
  const std::size_t n = inst.n;
  if (n > caps.dqc1_max_n)
    throw OracleCapError("dqc1_circuit_sim: n = " + std::to_string(n) +
                         " exceeds the oracle cap of " + std::to_string(caps.dqc1_max_n));
  require_power_of_two(n, "dqc1_circuit_sim");
  const std::size_t q = register_qubits(n);
  const std::size_t m = q + 1;

  DensityMatrix s{m, ComplexMatrix(2 * n, 2 * n)};
  for (std::size_t i = 0; i < n; ++i) s.rho(i, i) = 1.0 / static_cast<double>(n);

  const QubitSpan reg{1, q};
  apply_hadamard(s, 0);
  for (const SpecialUnitary* u : {&inst.a, &inst.b, &inst.c, &inst.d})
    apply_controlled(s, mat_adjoint(u->matrix()), 0, 1, reg);
  apply_hadamard(s, 0);
  const std::size_t clean[] = {0};
  return probability_zero(s, clean);
}

double fingerprint_circuit_sim(const AbcdInstance& inst, const OracleCaps& caps) {
  const std::size_t n = inst.n;
  if (n > caps.fingerprint_max_n)
    throw OracleCapError("fingerprint_circuit_sim: n = " + std::to_string(n) +
                         " exceeds the oracle cap of " + std::to_string(caps.fingerprint_max_n));
  require_power_of_two(n, "fingerprint_circuit_sim");
  const std::size_t q = register_qubits(n);
  constexpr std::size_t alice_ctl = 0;
  constexpr std::size_t bob_ctl = 1;
  const QubitSpan alice_reg{2, q};
  const QubitSpan bob_reg{2 + q, q};

  StateVector s{2 + 2 * q, std::vector<cplx>(std::size_t{4} * n * n)};
  const double amp = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < n; ++i) s.amplitudes[((c * 2 + c) * n + i) * n + i] = amp;

  // Alice: diag(C^dagger, A^T); Bob: diag(conj B, D).
  apply_controlled(s, mat_adjoint(inst.c.matrix()), alice_ctl, 0, alice_reg);
  apply_controlled(s, mat_transpose(inst.a.matrix()), alice_ctl, 1, alice_reg);
  apply_controlled(s, mat_conj(inst.b.matrix()), bob_ctl, 0, bob_reg);
  apply_controlled(s, inst.d.matrix(), bob_ctl, 1, bob_reg);

  // Referee.
  apply_hadamard(s, bob_ctl);
  apply_controlled_swap(s, alice_ctl, alice_reg, bob_reg);
  apply_hadamard(s, alice_ctl);
  const std::size_t controls[] = {alice_ctl, bob_ctl};
  return probability_zero(s, controls);
}

SwapTestResult swap_test_sim(const StateVector& u, const StateVector& v) {
  if (u.num_qubits != v.num_qubits || u.dim() != v.dim())
    throw std::invalid_argument("swap_test_sim: states have different dimensions");
  if (u.num_qubits == 0) throw std::invalid_argument("swap_test_sim: empty register");
  cplx overlap = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) overlap += std::conj(u.amplitudes[i]) * v.amplitudes[i];

  const std::size_t k = u.num_qubits;
  const std::size_t dim = u.dim();
  StateVector s{1 + 2 * k, std::vector<cplx>(2 * dim * dim)};
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) s.amplitudes[i * dim + j] = u.amplitudes[i] * v.amplitudes[j];
  apply_hadamard(s, 0);
  apply_controlled_swap(s, 0, {1, k}, {1 + k, k});
  apply_hadamard(s, 0);
  const std::size_t anc[] = {0};
  return {0.5 * (1.0 + std::norm(overlap)), probability_zero(s, anc)};
}

}  // namespace abcd
