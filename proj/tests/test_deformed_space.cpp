#include "qfock/deformed_space.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace qfock;
using qfock::testing::random_real_vector;
using qfock::testing::space_of;

namespace {

RealVector sorted(RealVector v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

}  // namespace

TEST(BuildSpace, TrivialDirection) {
  const auto s = space_of("1");
  ASSERT_EQ(s.dim(), 1);
  EXPECT_DOUBLE_EQ(s.generator()(0), 1.0);
  EXPECT_DOUBLE_EQ(s.metric()(0), 1.0);
  Vector x(1);
  x << cplx(0.3, -0.7);
  EXPECT_NEAR(std::abs(s.conjugate(x)(0) - std::conj(x(0))), 0.0, 1e-15);
}

TEST(BuildSpace, SingleBlock) {
  const auto s = space_of("2");
  ASSERT_EQ(s.dim(), 2);
  EXPECT_TRUE(sorted(s.generator()).isApprox(RealVector{{0.5, 2.0}}));
  EXPECT_TRUE(sorted(s.metric()).isApprox(RealVector{{2.0 / 3.0, 4.0 / 3.0}}));
}

TEST(BuildSpace, BlockPlusTrivial) {
  const auto s = space_of("4,1");
  ASSERT_EQ(s.dim(), 3);
  EXPECT_TRUE(sorted(s.metric()).isApprox(RealVector{{0.4, 1.0, 1.6}}));
}

TEST(BuildSpace, RejectsBadSpectra) {
  EXPECT_THROW(BlockSpectrum::parse("0.5"), std::invalid_argument);
  EXPECT_THROW(BlockSpectrum::parse("0"), std::invalid_argument);
  EXPECT_THROW(BlockSpectrum::parse("-2"), std::invalid_argument);
  EXPECT_THROW(BlockSpectrum::parse(""), std::invalid_argument);
  EXPECT_THROW(BlockSpectrum::parse("2,,1"), std::invalid_argument);
  EXPECT_THROW(BlockSpectrum::parse("abc"), std::invalid_argument);
  EXPECT_EQ(BlockSpectrum::parse("3:2,1").complex_dim(), 5);
}

TEST(BuildSpace, InvariantsAcrossSpectra) {
  for (const char* spec : {"1", "1,1", "2", "2,1", "3:2,1", "1.5,4"}) {
    const auto s = space_of(spec);
    const Matrix a = s.generator_matrix();
    const Matrix expected_g = 2.0 * a * (Matrix::Identity(s.dim(), s.dim()) + a).inverse();
    EXPECT_LE((s.metric_matrix() - expected_g).norm(), 1e-12) << spec;
    EXPECT_GT(s.metric().minCoeff(), 0.0);
    // I A I = A^{-1}; as a linear map I A I = S conj(A) S.
    const Matrix s_mat = s.pairing_matrix();
    EXPECT_LE((s_mat * a.conjugate() * s_mat - a.inverse()).norm(), 1e-12) << spec;
    EXPECT_LE((s_mat * s_mat - Matrix::Identity(s.dim(), s.dim())).norm(), 0.0);
    // On the real subspace the deformed form has the undeformed real part; the
    // imaginary part is antisymmetric.
    const Matrix b = s.real_basis();
    const Matrix form = b.adjoint() * s.metric_matrix() * b;
    EXPECT_LE((form.real() - RealMatrix::Identity(s.dim(), s.dim())).norm(), 1e-12) << spec;
    EXPECT_LE((form.imag() + form.imag().transpose()).norm(), 1e-12) << spec;
    EXPECT_LE((b.adjoint() * b - Matrix::Identity(s.dim(), s.dim())).norm(), 1e-12) << spec;
  }
}

TEST(DeformedInner, Examples) {
  const auto s1 = space_of("1");
  Vector e(1);
  e << 1.0;
  EXPECT_NEAR(std::abs(deformed_inner(s1, e, e) - 1.0), 0.0, 1e-15);

  const auto s2 = space_of("2");
  Vector x = Vector::Zero(2);
  x(0) = 1.0;  // eigenvector with eigenvalue 2
  ASSERT_DOUBLE_EQ(s2.generator()(0), 2.0);
  EXPECT_NEAR(deformed_inner(s2, x, x).real(), 4.0 / 3.0, 1e-15);

  Rng rng(7);
  const auto s3 = space_of("2,1");
  for (int i = 0; i < 20; ++i) {
    const Vector u = random_vector(3, rng), v = random_vector(3, rng);
    EXPECT_NEAR(std::abs(deformed_inner(s3, u, v) - std::conj(deformed_inner(s3, v, u))), 0.0, 1e-12);
    EXPECT_GT(deformed_inner(s3, u, u).real(), 0.0);
    // Real vectors: deformed and undeformed norms coincide.
    const Vector a = random_real_vector(s3, rng), b = random_real_vector(s3, rng);
    EXPECT_NEAR(deformed_inner(s3, a, a).real(), a.squaredNorm(), 1e-12);
    EXPECT_NEAR(deformed_inner(s3, a, b).real(), a.dot(b).real(), 1e-12);
  }
  EXPECT_THROW(deformed_inner(s3, Vector::Zero(2), Vector::Zero(3)), std::invalid_argument);
}

TEST(ItiResidual, Examples) {
  const auto s = space_of("1,1");
  Matrix real_map(2, 2);
  real_map << 0.3, -0.2, 0.5, 0.1;
  EXPECT_NEAR(iti_residual(s, s, real_map), 0.0, 1e-15);
  EXPECT_NEAR(iti_residual(s, s, kI * Matrix(Matrix::Identity(2, 2))), 2.0, 1e-14);

  // Functions of A that are constant on conjugation pairs commute with I.
  const auto t = space_of("3,2,1");
  const auto f = [](double a) { return 1.0 / (1.0 + a); };
  EXPECT_LE(iti_residual(t, t, paired_spectral_map(t, f)), 1e-12);
  // A plain non-symmetric function does not.
  EXPECT_GT(iti_residual(t, t, spectral_map(t, f)), 1e-3);
  EXPECT_THROW(iti_residual(t, s, paired_spectral_map(t, f)), std::invalid_argument);
}

TEST(Dilate, ZeroAndIdentity) {
  const auto s = space_of("2,1");
  const int d = s.dim();
  const auto zero = dilate(DeformedContraction(s, s, Matrix::Zero(d, d)));
  Matrix expected = Matrix::Zero(2 * d, 2 * d);
  expected.topLeftCorner(d, d).setIdentity();
  expected.bottomRightCorner(d, d) = -Matrix::Identity(d, d);
  EXPECT_LE((zero.unitary - expected).norm(), 1e-12);

  const auto id = dilate(DeformedContraction(s, s, Matrix::Identity(d, d)));
  expected.setZero();
  expected.topRightCorner(d, d).setIdentity();
  expected.bottomLeftCorner(d, d).setIdentity();
  EXPECT_LE((id.unitary - expected).norm(), 1e-7);
}

TEST(Dilate, RandomContractionsAreUnitaryDilations) {
  Rng rng(11);
  for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
           {"1", "1"}, {"2", "2,1"}, {"2,1", "1,1"}, {"3,1", "2"}}) {
    const auto src = space_of(a), tgt = space_of(b);
    for (int i = 0; i < 100; ++i) {
      const bool real = (i % 2) == 0;
      const auto t = random_contraction(src, tgt, 0.5, rng, real);
      EXPECT_NEAR(t.norm(), 0.5, 1e-12);
      const auto dil = dilate(t);
      const Matrix& u = dil.unitary;
      const Matrix u_adj = deformed_adjoint(dil.sum, dil.sum, u);
      const auto n = u.rows();
      EXPECT_LE((u_adj * u - Matrix::Identity(n, n)).norm(), 1e-10);
      EXPECT_LE((u * u_adj - Matrix::Identity(n, n)).norm(), 1e-10);
      EXPECT_LE((dil.projection * u * dil.inclusion - t.matrix()).norm(), 1e-10);
      if (real) EXPECT_LE(t.iti_residual(), 1e-12);
    }
  }
}

TEST(Dilate, RejectsNonContractions) {
  const auto s = space_of("2");
  EXPECT_THROW(DeformedContraction(s, s, 1.5 * Matrix(Matrix::Identity(2, 2))), std::domain_error);
}

TEST(IntertwinerResidual, Examples) {
  const std::vector<double> ts{-1.0, 0.3, 2.0};
  const auto s = space_of("2,3");
  const int d = s.dim();
  EXPECT_NEAR(intertwiner_residual(s, s, Matrix::Identity(d, d), ts), 0.0, 1e-15);
  const auto fa = paired_spectral_map(s, [](double a) { return std::exp(-a); });
  EXPECT_LE(intertwiner_residual(s, s, fa, ts), 1e-12);
  // Swap the λ=2 block with the λ=3 block.
  Matrix swap = Matrix::Zero(d, d);
  swap(0, 2) = swap(2, 0) = swap(1, 3) = swap(3, 1) = 1.0;
  EXPECT_GT(intertwiner_residual(s, s, swap, ts), 0.1);
  // The swap still respects the real structure.
  EXPECT_LE(iti_residual(s, s, swap), 1e-15);
}

TEST(IntertwinerResidual, IntertwinersOfFunctionalCalculusAreReal) {
  for (const char* spec : {"1", "2", "2,1", "5:2,1,1"}) {
    const auto s = space_of(spec);
    for (double c : {0.1, 1.0, 3.0}) {
      const auto m = paired_spectral_map(s, [c](double a) { return 1.0 / (1.0 + c * a); });
      EXPECT_LE(intertwiner_residual(s, s, m, std::vector<double>{0.7}), 1e-12);
      EXPECT_LE(iti_residual(s, s, m), 1e-12);
    }
  }
}
