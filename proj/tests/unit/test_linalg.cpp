#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "abcd/linalg.hpp"
#include "abcd/montecarlo.hpp"

using namespace abcd;

namespace {

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  Rng rng(RngStream{seed, 77});
  ComplexMatrix m(n, n);
  for (auto& z : m.data()) z = rng.complex_normal();
  return m;
}

}  // namespace

TEST(Matrix, TraceOfIdentity) {
  for (std::size_t n : {1u, 2u, 7u, 64u}) EXPECT_EQ(mat_trace(ComplexMatrix::identity(n)), cplx(n));
}

TEST(Matrix, TraceIsCyclic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = random_matrix(8, seed), b = random_matrix(8, seed + 100);
    EXPECT_LE(std::abs(mat_trace(mat_mul(a, b)) - mat_trace(mat_mul(b, a))), 1e-10);
  }
}

TEST(Matrix, ShapeMismatchThrows) {
  EXPECT_THROW(mat_mul(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), ShapeError);
  EXPECT_THROW(mat_trace(ComplexMatrix(2, 3)), ShapeError);
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<cplx>(3)), ShapeError);
}

TEST(Matrix, AdjointTransposeConjCompose) {
  const auto a = random_matrix(5, 1);
  EXPECT_EQ(mat_adjoint(a), mat_conj(mat_transpose(a)));
  EXPECT_EQ(mat_adjoint(mat_adjoint(a)), a);
}

TEST(Matrix, DeterminantOfDiagonal) {
  const std::vector<cplx> d{{2, 0}, {0, 1}, {-1, 1}};
  EXPECT_LE(std::abs(determinant(ComplexMatrix::diagonal(d)) - d[0] * d[1] * d[2]), 1e-12);
}

TEST(Matrix, ExpmOfDiagonalHermitian) {
  const std::vector<cplx> d{0.3, -1.2, 0.9};
  const ComplexMatrix u = expm_i_hermitian(ComplexMatrix::diagonal(d), 0.7);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_LE(std::abs(u(i, i) - std::exp(cplx(0, 0.7 * d[i].real()))), 1e-12);
  EXPECT_LE(unitarity_defect(u), 1e-12);
}

TEST(SpecialUnitaryType, RejectsNonUnitaryAndWrongDeterminant) {
  EXPECT_THROW(SpecialUnitary(random_matrix(3, 2)), std::invalid_argument);
  const std::vector<cplx> ph{{0, 1}, {1, 0}};  // unitary, det = i
  EXPECT_THROW(SpecialUnitary(ComplexMatrix::diagonal(ph)), std::invalid_argument);
  const std::vector<cplx> ok{{0, 1}, {0, -1}};
  EXPECT_NO_THROW(SpecialUnitary(ComplexMatrix::diagonal(ok)));
  EXPECT_THROW(SpecialUnitary(ComplexMatrix(2, 3)), std::invalid_argument);
}

TEST(SpecialUnitaryType, ProductAndAdjointStayInGroup) {
  const auto u = haar_su(6, RngStream{1, 0}), v = haar_su(6, RngStream{2, 0});
  const SpecialUnitary w = u * v.adjoint();
  EXPECT_LE(unitarity_defect(w.matrix()), 1e-10);
  EXPECT_LE(std::abs(determinant(w.matrix()) - 1.0), 1e-8);
  EXPECT_LE(max_abs_diff(mat_mul(u.matrix(), mat_adjoint(u.matrix())), ComplexMatrix::identity(6)),
            1e-10);
}

TEST(Haar, DimensionOneIsIdentityAndZeroThrows) {
  EXPECT_EQ(haar_su(1, RngStream{1, 1}).matrix(), ComplexMatrix::identity(1));
  EXPECT_THROW(haar_su(0, RngStream{1, 1}), std::invalid_argument);
}

TEST(Haar, OutputsSatisfyInvariants) {
  for (std::size_t n : {2u, 3u, 5u, 16u, 64u})
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto u = haar_su(n, RngStream{s, n});
      EXPECT_LE(unitarity_defect(u.matrix()), 1e-10);
      EXPECT_LE(std::abs(determinant(u.matrix()) - 1.0), 1e-8);
    }
}

TEST(Haar, Deterministic) {
  EXPECT_EQ(haar_su(8, RngStream{9, 9}), haar_su(8, RngStream{9, 9}));
  EXPECT_NE(haar_su(8, RngStream{9, 9}), haar_su(8, RngStream{9, 10}));
}

// E|Tr U|^2 = 1 and E Tr U = 0 for the fundamental representation.
TEST(Haar, TraceMoments) {
  for (std::size_t n : {2u, 4u}) {
    Rng rng(RngStream{11, n});
    mc::MeanAccumulator sq, tr;
    for (int s = 0; s < 20000; ++s) {
      const cplx t = mat_trace(haar_su(n, rng).matrix());
      sq.add(std::norm(t));
      tr.add(t);
    }
    EXPECT_NEAR(sq.mean.real(), 1.0, 5 * sq.std_error());
    EXPECT_LE(std::abs(tr.mean), 5 * tr.std_error());
  }
}

// Left invariance: V U is Haar again, so E|Tr(V U)|^2 = 1 for fixed V.
TEST(Haar, LeftInvarianceOfSecondMoment) {
  const std::size_t n = 3;
  const auto v = haar_su(n, RngStream{5, 5});
  Rng rng(RngStream{12, 0});
  mc::MeanAccumulator a, b;
  for (int s = 0; s < 20000; ++s) {
    const auto u = haar_su(n, rng);
    a.add(std::norm(mat_trace((v * u).matrix())));
    b.add(std::pow(std::abs(u.matrix()(0, 0)), 4));
  }
  // E|U_00|^4 = 2 / (n (n + 1)) for Haar unitaries.
  EXPECT_NEAR(b.mean.real(), 2.0 / (n * (n + 1)), 5 * b.std_error());
  EXPECT_NEAR(a.mean.real(), 1.0, 5 * a.std_error());
}

TEST(Perturbation, ZeroEpsilonIsIdentity) {
  EXPECT_EQ(perturbation_su(16, 0.0, RngStream{1, 1}).matrix(), ComplexMatrix::identity(16));
  EXPECT_THROW(perturbation_su(16, -0.1, RngStream{1, 1}), std::invalid_argument);
}

TEST(Perturbation, SatisfiesInvariants) {
  for (double eps : {0.05, 0.3, 1.0, 3.0}) {
    const auto u = perturbation_su(32, eps, RngStream{3, 3});
    EXPECT_LE(unitarity_defect(u.matrix()), 1e-10);
    EXPECT_LE(std::abs(determinant(u.matrix()) - 1.0), 1e-8);
  }
}

TEST(Perturbation, HermitianIsTracelessWithUnitSecondMoment) {
  Rng rng(RngStream{4, 4});
  const std::size_t n = 128;
  const ComplexMatrix h = random_traceless_hermitian(n, rng);
  EXPECT_LE(max_abs_diff(h, mat_adjoint(h)), 1e-15);
  EXPECT_LE(std::abs(mat_trace(h)), 1e-12);
  EXPECT_NEAR(mat_trace(mat_mul(h, h)).real() / n, 1.0, 0.05);
}

// Semicircle on [-2, 2]: E Re Tr exp(i eps H) / n -> J1(2 eps) / eps.
TEST(Perturbation, MeanTraceFollowsBesselOracle) {
  const std::size_t n = 64;
  for (double eps : {0.1, 0.3, 0.5}) {
    mc::MeanAccumulator acc;
    for (std::uint64_t s = 0; s < 100; ++s)
      acc.add(mat_trace(perturbation_su(n, eps, RngStream{21, s}).matrix()).real() / n);
    const double oracle = std::cyl_bessel_j(1.0, 2.0 * eps) / eps;
    EXPECT_NEAR(acc.mean.real(), oracle, 5 * acc.std_error() + 1e-3) << "eps=" << eps;
  }
}

// Stored calibration table from an independent brute-force implementation.
TEST(Perturbation, MatchesCalibrationFixture) {
  std::ifstream in(std::string(ABCD_FIXTURE_DIR) + "/perturbation_calibration_n64.csv");
  ASSERT_TRUE(in);
  std::string line;
  std::getline(in, line);
  double prev = 2.0;
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 4u);
    mc::MeanAccumulator acc;
    for (std::uint64_t s = 0; s < 100; ++s)
      acc.add(mat_trace(perturbation_su(64, v[0], RngStream{22, s}).matrix()).real() / 64.0);
    const double se = std::hypot(acc.std_error(), v[2]);
    EXPECT_NEAR(acc.mean.real(), v[1], 5 * se + 1e-9) << "eps=" << v[0];
    EXPECT_LE(acc.mean.real(), prev + 1e-12);
    prev = acc.mean.real();
    ++rows;
  }
  EXPECT_EQ(rows, 11);
}

TEST(HaarVector, UnitNormAndDeterministic) {
  Rng a(RngStream{1, 2}), b(RngStream{1, 2});
  const auto v = haar_unit_vector(33, a);
  double norm2 = 0.0;
  for (const auto& z : v) norm2 += std::norm(z);
  EXPECT_NEAR(norm2, 1.0, 1e-14);
  EXPECT_EQ(v, haar_unit_vector(33, b));
}
