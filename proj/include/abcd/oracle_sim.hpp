#pragma once

// Brute-force circuit simulators for both protocols. They share nothing with
// the closed forms in protocols.hpp beyond the instance itself, which is what
// makes them useful as oracles.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "abcd/instances.hpp"

namespace abcd {

/// Pure state on `num_qubits` qubits; qubit 0 is the most significant bit of
/// the amplitude index.
struct StateVector {
  std::size_t num_qubits = 0;
  std::vector<cplx> amplitudes;

  static StateVector basis(std::size_t num_qubits, std::size_t index = 0);
  [[nodiscard]] std::size_t dim() const { return amplitudes.size(); }
  [[nodiscard]] double norm() const;
};

struct DensityMatrix {
  std::size_t num_qubits = 0;
  ComplexMatrix rho;

  static DensityMatrix from_pure(const StateVector& psi);
  [[nodiscard]] std::size_t dim() const { return rho.rows(); }
  /// Hermiticity and unit trace; the PSD check (eigenvalues >= tol.psd) runs
  /// only when `check_psd` is set. Throws std::domain_error on violation.
  void validate(const Tolerances& tol = default_tolerances(), bool check_psd = false) const;
};

/// A contiguous run of qubits [first, first + count).
struct QubitSpan {
  std::size_t first = 0;
  std::size_t count = 0;
};

class OracleCapError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Applies |b><b| (x) U + (I - |b><b|) (x) I, b = control_value, U acting on
/// `target`. Density matrices are conjugated by the same operator.
void apply_controlled(StateVector& s, const ComplexMatrix& u, std::size_t control,
                      int control_value, QubitSpan target);
void apply_controlled(DensityMatrix& s, const ComplexMatrix& u, std::size_t control,
                      int control_value, QubitSpan target);

/// Uncontrolled gate on `target`.
void apply_gate(StateVector& s, const ComplexMatrix& u, QubitSpan target);
void apply_gate(DensityMatrix& s, const ComplexMatrix& u, QubitSpan target);

void apply_hadamard(StateVector& s, std::size_t qubit);
void apply_hadamard(DensityMatrix& s, std::size_t qubit);

/// Swaps registers a and b (equal width, disjoint) on the branch where
/// `control` is |1>. Implemented as an index permutation.
void apply_controlled_swap(StateVector& s, std::size_t control, QubitSpan a, QubitSpan b);

/// Probability that every listed qubit reads 0 in the computational basis.
double probability_zero(const StateVector& s, std::span<const std::size_t> qubits);
double probability_zero(const DensityMatrix& s, std::span<const std::size_t> qubits);

ComplexMatrix hadamard_matrix();

struct OracleCaps {
  std::size_t dqc1_max_n = 64;
  std::size_t fingerprint_max_n = 16;
};

/// Density-matrix simulation of the one-clean-qubit protocol: rho0 =
/// |0><0| (x) I/N, H, controlled A^dagger, B^dagger, C^dagger, D^dagger,
/// Hadamard-basis measurement. Returns Pr[|+>]. Requires n a power of two.
double dqc1_circuit_sim(const AbcdInstance& inst, const OracleCaps& caps = {});

/// Statevector simulation of the entangled-fingerprint protocol. Shared state
/// (1/sqrt(2N)) sum_i (|00> + |11>)|i>|i>; Alice applies diag(C^dagger, A^T)
/// controlled on her qubit, Bob diag(conj B, D) controlled on his; the
/// referee measures Bob's control in the Hadamard basis, applies a controlled
/// swap of the two registers and measures Alice's control in the Hadamard
/// basis, accepting on |+>|+>. Requires n a power of two.
double fingerprint_circuit_sim(const AbcdInstance& inst, const OracleCaps& caps = {});

struct SwapTestResult {
  double formula = 0.0;  // (1 + |<u|v>|^2) / 2
  double circuit = 0.0;  // ancilla + controlled swap + Hadamard measurement
};
SwapTestResult swap_test_sim(const StateVector& u, const StateVector& v);

}  // namespace abcd
