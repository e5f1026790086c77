#include <gtest/gtest.h>

#include <cmath>

#include "abcd/oracle_sim.hpp"
#include "abcd/protocols.hpp"

using namespace abcd;

namespace {

StateVector random_state(std::size_t qubits, std::uint64_t seed) {
  Rng rng(RngStream{seed, 31});
  StateVector s{qubits, haar_unit_vector(std::size_t{1} << qubits, rng)};
  return s;
}

double state_diff(const StateVector& a, const StateVector& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a.amplitudes[i] - b.amplitudes[i]));
  return m;
}

AbcdInstance haar_instance(std::size_t n, std::uint64_t seed) {
  const RngStream s{seed, n};
  return AbcdInstance{n, haar_su(n, s.derive(0)), haar_su(n, s.derive(1)), haar_su(n, s.derive(2)),
                      haar_su(n, s.derive(3)), Label::Unknown, seed, GenMode::HaarNo};
}

AbcdInstance identity_instance(std::size_t n) {
  const auto i = SpecialUnitary::identity(n);
  return AbcdInstance{n, i, i, i, i, Label::Unknown, 0, GenMode::HaarNo};
}

}  // namespace

TEST(Gates, IdentityLeavesStateUnchanged) {
  const auto s = random_state(4, 1);
  auto t = s;
  apply_controlled(t, ComplexMatrix::identity(4), 0, 1, {1, 2});
  apply_gate(t, ComplexMatrix::identity(8), {1, 3});
  EXPECT_LE(state_diff(s, t), 1e-15);
}

TEST(Gates, InactiveControlLeavesStateUnchanged) {
  // Control qubit 0 in |0>: amplitudes only on the lower half.
  StateVector s = random_state(3, 2);
  for (std::size_t i = 4; i < 8; ++i) s.amplitudes[i] = 0.0;
  auto t = s;
  apply_controlled(t, haar_su(4, RngStream{2, 2}).matrix(), 0, 1, {1, 2});
  EXPECT_LE(state_diff(s, t), 1e-15);
}

TEST(Gates, UThenAdjointRestores) {
  const auto s = random_state(5, 3);
  const auto u = haar_su(4, RngStream{3, 3});
  auto t = s;
  apply_controlled(t, u.matrix(), 4, 0, {1, 2});
  apply_controlled(t, u.adjoint().matrix(), 4, 0, {1, 2});
  EXPECT_LE(state_diff(s, t), 1e-12);
}

TEST(Gates, DensityMatrixAgreesWithStateVector) {
  const auto s = random_state(3, 4);
  auto rho = DensityMatrix::from_pure(s);
  auto t = s;
  const auto u = haar_su(2, RngStream{4, 4});
  apply_controlled(t, u.matrix(), 0, 1, {2, 1});
  apply_controlled(rho, u.matrix(), 0, 1, {2, 1});
  apply_hadamard(t, 1);
  apply_hadamard(rho, 1);
  EXPECT_LE(max_abs_diff(rho.rho, DensityMatrix::from_pure(t).rho), 1e-12);
  const std::vector<std::size_t> q{0, 2};
  EXPECT_NEAR(probability_zero(t, q), probability_zero(rho, q), 1e-12);
  EXPECT_NO_THROW(rho.validate(default_tolerances(), true));
}

TEST(Gates, InvalidTargetsRejected) {
  auto s = random_state(3, 5);
  EXPECT_THROW(apply_controlled(s, ComplexMatrix::identity(4), 1, 1, {1, 2}), std::invalid_argument);
  EXPECT_THROW(apply_gate(s, ComplexMatrix::identity(4), {2, 2}), std::invalid_argument);
  EXPECT_THROW(apply_gate(s, ComplexMatrix::identity(2), {0, 2}), std::invalid_argument);
}

TEST(DensityValidation, RejectsBadMatrices) {
  DensityMatrix d{1, ComplexMatrix::identity(2)};
  EXPECT_THROW(d.validate(), std::domain_error);  // trace 2
  d.rho = ComplexMatrix(2, 2, {1.0, {0, 1}, 0.0, 0.0});
  EXPECT_THROW(d.validate(), std::domain_error);  // not Hermitian
  d.rho = ComplexMatrix(2, 2, {1.5, 0.0, 0.0, -0.5});
  EXPECT_NO_THROW(d.validate());
  EXPECT_THROW(d.validate(default_tolerances(), true), std::domain_error);  // not PSD
}

TEST(SwapTest, KnownValuesAndRandomPairs) {
  const auto u = random_state(3, 6);
  EXPECT_NEAR(swap_test_sim(u, u).circuit, 1.0, 1e-12);
  const StateVector e0 = StateVector::basis(2, 0), e1 = StateVector::basis(2, 3);
  EXPECT_NEAR(swap_test_sim(e0, e1).circuit, 0.5, 1e-12);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto r = swap_test_sim(random_state(3, 100 + s), random_state(3, 200 + s));
    EXPECT_NEAR(r.circuit, r.formula, 1e-12);
  }
}

TEST(Dqc1Circuit, KnownCases) {
  EXPECT_NEAR(dqc1_circuit_sim(gen_yes(4, GenMode::ExactInverse, 0.0, RngStream{1, 1})), 1.0, 1e-10);
  auto inst = identity_instance(2);
  const std::vector<cplx> d{{0, 1}, {0, -1}};
  inst.a = SpecialUnitary(ComplexMatrix::diagonal(d));
  EXPECT_NEAR(dqc1_circuit_sim(inst), 0.5, 1e-10);
}

TEST(Dqc1Circuit, MatchesClosedForm) {
  for (std::size_t n : {2u, 4u, 8u, 16u})
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto inst = haar_instance(n, s);
      EXPECT_NEAR(dqc1_circuit_sim(inst), dqc1_accept_exact(inst), 1e-9) << "n=" << n;
    }
}

TEST(FingerprintCircuit, KnownCases) {
  EXPECT_NEAR(fingerprint_circuit_sim(identity_instance(2)), 0.5, 1e-10);
  auto inst = identity_instance(2);
  const std::vector<cplx> d{{0, 1}, {0, -1}};
  inst.a = SpecialUnitary(ComplexMatrix::diagonal(d));
  EXPECT_NEAR(fingerprint_circuit_sim(inst), 0.25, 1e-10);
}

TEST(FingerprintCircuit, MatchesClosedForm) {
  for (std::size_t n : {2u, 4u, 8u})
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto inst = haar_instance(n, s);
      EXPECT_NEAR(fingerprint_circuit_sim(inst), fingerprint_accept_exact(inst), 1e-9) << "n=" << n;
    }
}

TEST(Caps, EnforcedAndPowerOfTwoRequired) {
  EXPECT_THROW(dqc1_circuit_sim(identity_instance(128)), OracleCapError);
  EXPECT_THROW(fingerprint_circuit_sim(identity_instance(32)), OracleCapError);
  OracleCaps small{4, 2};
  EXPECT_THROW(dqc1_circuit_sim(identity_instance(8), small), OracleCapError);
  EXPECT_THROW(dqc1_circuit_sim(identity_instance(3)), std::invalid_argument);
  EXPECT_THROW(fingerprint_circuit_sim(identity_instance(6)), std::invalid_argument);
}
