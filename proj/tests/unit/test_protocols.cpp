#include <gtest/gtest.h>

#include <cmath>

#include "abcd/protocols.hpp"

using namespace abcd;

namespace {

AbcdInstance with_a(SpecialUnitary a) {
  const std::size_t n = a.n();
  const auto i = SpecialUnitary::identity(n);
  return AbcdInstance{n, std::move(a), i, i, i, Label::Unknown, 0, GenMode::HaarNo};
}

AbcdInstance traceless2() {
  const std::vector<cplx> d{{0, 1}, {0, -1}};
  return with_a(SpecialUnitary(ComplexMatrix::diagonal(d)));
}

}  // namespace

TEST(ClosedForm, ExactInverseValues) {
  const auto inst = gen_yes(16, GenMode::ExactInverse, 0.0, RngStream{1, 1});
  EXPECT_NEAR(dqc1_accept_exact(inst), 1.0, 1e-12);
  EXPECT_NEAR(fingerprint_accept_exact(inst), 0.5, 1e-12);
  EXPECT_LE(dqc1_accept_exact(inst), 1.0);
  EXPECT_LE(fingerprint_accept_exact(inst), 0.5);
}

TEST(ClosedForm, TracelessValues) {
  const auto inst = traceless2();
  EXPECT_NEAR(dqc1_accept_exact(inst), 0.5, 1e-15);
  EXPECT_NEAR(fingerprint_accept_exact(inst), 0.25, 1e-15);
}

TEST(ClosedForm, PromiseBoundsHoldOnGeneratedInstances) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto yes = gen_yes(32, GenMode::Perturbed, 0.3, RngStream{s, 7});
    const auto no = gen_no(32, RngStream{s, 8});
    EXPECT_GE(dqc1_accept_exact(yes), 0.95);
    EXPECT_LE(dqc1_accept_exact(no), 0.55);
    EXPECT_GE(fingerprint_accept_exact(yes), 0.475);
    EXPECT_LE(fingerprint_accept_exact(no), 0.275);
  }
}

TEST(Cost, QubitCounts) {
  EXPECT_EQ(register_qubits(1), 0u);
  EXPECT_EQ(register_qubits(2), 1u);
  EXPECT_EQ(register_qubits(3), 2u);
  EXPECT_EQ(register_qubits(1024), 10u);
  EXPECT_EQ(register_qubits(1025), 11u);
  EXPECT_EQ(qubit_cost(Protocol::Dqc1, 1024), 44u);
  EXPECT_EQ(qubit_cost(Protocol::Fingerprint, 1024), 22u);
  for (std::size_t n = 2; n <= 1024; n *= 2)
    EXPECT_EQ(qubit_cost(Protocol::Dqc1, n), 4 * (std::bit_width(n) - 1 + 1));
  EXPECT_THROW(qubit_cost(Protocol::Dqc1, 1), std::invalid_argument);
}

TEST(Register, PrepareAndControlledAdjoint) {
  const std::vector<cplx> v{{0.6, 0}, {0, 0.8}, 0.0};
  const auto st = dqc1::prepare(v, 3);
  ASSERT_EQ(st.size(), 8u);  // 1 + ceil(log2 3) = 3 qubits
  double norm = 0;
  for (auto z : st) norm += std::norm(z);
  EXPECT_NEAR(norm, 1.0, 1e-15);
  EXPECT_NEAR(dqc1::plus_probability(st), 1.0, 1e-15);
  EXPECT_THROW(dqc1::prepare(v, 4), std::invalid_argument);

  // U then U^dagger restores the register.
  const auto u = haar_su(3, RngStream{2, 2});
  auto s2 = st;
  dqc1::apply_controlled_adjoint(s2, u.matrix());
  dqc1::apply_controlled_adjoint(s2, u.adjoint().matrix());
  for (std::size_t i = 0; i < st.size(); ++i) EXPECT_LE(std::abs(s2[i] - st[i]), 1e-12);
}

TEST(Register, RunForVectorMatchesExpectation) {
  const auto inst = gen_no(8, RngStream{3, 3});
  Rng rng(RngStream{3, 4});
  const auto v = haar_unit_vector(8, rng);
  const ComplexMatrix m = mat_mul(mat_mul(inst.a.matrix(), inst.b.matrix()),
                                  mat_mul(inst.c.matrix(), inst.d.matrix()));
  const auto mv = mat_vec(m, v);
  cplx ip = 0.0;
  for (std::size_t i = 0; i < 8; ++i) ip += std::conj(v[i]) * mv[i];
  EXPECT_NEAR(dqc1_run_for_vector(inst, v), 0.5 + 0.5 * ip.real(), 1e-12);
}

TEST(Sampled, ExactInverseGivesOneWithZeroSpread) {
  const auto inst = gen_yes(16, GenMode::ExactInverse, 0.0, RngStream{4, 4});
  const auto s = dqc1_accept_sampled(inst, 500, RngStream{4, 5}, false, 8);
  EXPECT_NEAR(s.estimate, 1.0, 1e-12);
  EXPECT_LE(s.std_error, 1e-12);
  EXPECT_EQ(s.samples, 500u);
}

TEST(Sampled, NoInstanceWithinFiveSigmaOfClosedForm) {
  const auto inst = gen_no(64, RngStream{5, 5});
  const auto s = dqc1_accept_sampled(inst, 10000, RngStream{5, 6}, false);
  EXPECT_NEAR(s.estimate, dqc1_accept_exact(inst), 5 * s.std_error);
  const auto b = dqc1_accept_sampled(inst, 10000, RngStream{5, 7}, true);
  EXPECT_NEAR(b.estimate, dqc1_accept_exact(inst), 5 * b.std_error);
}

TEST(Sampled, DeterministicAndIndependentOfExecution) {
  const auto inst = gen_no(16, RngStream{6, 6});
  const auto a = dqc1_accept_sampled(inst, 3000, RngStream{6, 7}, true, 16, mc::Execution::Parallel);
  const auto b = dqc1_accept_sampled(inst, 3000, RngStream{6, 7}, true, 16, mc::Execution::Serial);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_THROW(dqc1_accept_sampled(inst, 0, RngStream{}, false), std::invalid_argument);
}

TEST(Amplify, HoeffdingValue) {
  EXPECT_NEAR(hoeffding_bound(220, 0.1), 2 * std::exp(-4.4), 1e-15);
  EXPECT_LE(hoeffding_bound(220, 0.1), 0.025);
  const auto inst = gen_yes(8, GenMode::ExactInverse, 0.0, RngStream{1, 1});
  const auto r = amplify_decide(Protocol::Fingerprint, inst, DecisionRule::midpoint(Protocol::Fingerprint, 220),
                                RngStream{1, 2});
  ASSERT_TRUE(r.hoeffding_bound.has_value());
  EXPECT_NEAR(*r.hoeffding_bound, 2 * std::exp(-4.4), 1e-12);
  EXPECT_EQ(r.decision, Decision::AcceptYes);
  EXPECT_EQ(r.qubit_cost, 8u);
}

TEST(Amplify, MidpointsAndThresholdValidation) {
  EXPECT_DOUBLE_EQ(DecisionRule::midpoint(Protocol::Dqc1, 1).threshold, 0.75);
  EXPECT_DOUBLE_EQ(DecisionRule::midpoint(Protocol::Fingerprint, 1).threshold, 0.375);
  const auto inst = gen_yes(8, GenMode::ExactInverse, 0.0, RngStream{1, 1});
  EXPECT_THROW(amplify_decide(Protocol::Dqc1, inst, {0.95, 10}, RngStream{}), std::invalid_argument);
  EXPECT_THROW(amplify_decide(Protocol::Fingerprint, inst, {0.5, 10}, RngStream{}),
               std::invalid_argument);
  EXPECT_THROW(amplify_decide(Protocol::Dqc1, inst, {0.75, 0}, RngStream{}), std::invalid_argument);
}

TEST(Amplify, Dqc1ExactInverseSingleShotAlwaysAccepts) {
  const auto inst = gen_yes(8, GenMode::ExactInverse, 0.0, RngStream{2, 1});
  for (std::uint64_t s = 0; s < 50; ++s)
    EXPECT_EQ(amplify_decide(Protocol::Dqc1, inst, {0.75, 1}, RngStream{s, 3}).decision,
              Decision::AcceptYes);
}

TEST(Amplify, Dqc1NoInstanceRejectedMostOfTheTime) {
  const auto inst = gen_no(256, RngStream{3, 1});
  int rejected = 0;
  for (std::uint64_t s = 0; s < 200; ++s)
    rejected += amplify_decide(Protocol::Dqc1, inst, {0.75, 50}, RngStream{s, 4}).decision ==
                Decision::RejectNo;
  EXPECT_GE(rejected, 190);
}

TEST(Report, ConsistencyFlag) {
  ProtocolReport r;
  r.exact_p = 0.5;
  r.estimated_p = 0.51;
  r.std_error = 0.01;
  EXPECT_TRUE(r.consistent());
  r.estimated_p = 0.6;
  EXPECT_FALSE(r.consistent());
}
