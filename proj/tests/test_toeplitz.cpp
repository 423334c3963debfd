#include "qfock/toeplitz.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace qfock;
using qfock::testing::q_grid;
using qfock::testing::space_of;

namespace {

std::vector<Vector> random_list(int dim, int n, Rng& rng) {
  std::vector<Vector> out;
  for (int i = 0; i < n; ++i) out.push_back(random_vector(dim, rng));
  return out;
}

GradedOperator product_oracle(const FockContext& ctx, const std::vector<Vector>& v, const std::vector<Vector>& w) {
  GradedOperator x = ctx.identity();
  for (const auto& e : v) x = x * creation(ctx, e);
  for (const auto& e : w) x = x * annihilation(ctx, e);
  return x;
}

}  // namespace

TEST(Monomial, TrivialCases) {
  Rng rng(1);
  const FockContext ctx(space_of("2,1"), 0.4, 3);
  const auto id = monomial(ctx, std::vector<Vector>{}, std::vector<Vector>{});
  EXPECT_EQ(id.total_length(), 0);
  EXPECT_LE(window_residual(id.realized(), ctx.identity(), ctx, 3), 1e-15);
  const Vector v = random_vector(3, rng);
  const auto c = monomial(ctx, std::vector<Vector>{v}, std::vector<Vector>{});
  EXPECT_EQ(c.total_length(), 1);
  EXPECT_LE(window_residual(c.realized(), creation(ctx, v), ctx, 3), 1e-14);
  EXPECT_THROW(monomial(ctx, random_list(3, 2, rng), random_list(3, 2, rng)), std::out_of_range);
}

TEST(Monomial, FreeBalancedOnDegreeOne) {
  Rng rng(2);
  const auto space = space_of("2,1");
  const FockContext ctx(space, 0.0, 3);
  for (int i = 0; i < 5; ++i) {
    const Vector v = random_vector(3, rng), w = random_vector(3, rng), u = random_vector(3, rng);
    const auto x = monomial(ctx, std::vector<Vector>{v}, std::vector<Vector>{w});
    const Vector expected = deformed_inner(space, w, u) * v;
    EXPECT_LE((x.realized().block(1, 1) * u - expected).norm(), 1e-12);
  }
}

TEST(Monomial, MatchesProductsOfCreationsAndAnnihilations) {
  Rng rng(3);
  for (const char* spec : {"1", "2", "2,1"}) {
    const auto space = space_of(spec);
    for (double q : q_grid()) {
      const FockContext ctx(space, q, 4);
      for (int k = 0; k <= 2; ++k)
        for (int r = 0; r <= 2; ++r) {
          const auto v = random_list(space.dim(), k, rng), w = random_list(space.dim(), r, rng);
          const auto x = monomial(ctx, v, w);
          EXPECT_EQ(x.creations(), k);
          EXPECT_EQ(x.annihilations(), r);
          EXPECT_LE(window_residual(x.realized(), product_oracle(ctx, v, w), ctx, 4 - k), 1e-10)
              << spec << " q=" << q << " k=" << k << " r=" << r;
        }
    }
  }
}

TEST(LengthElement, KillsLowerDegrees) {
  Rng rng(4);
  for (double q : q_grid()) {
    const FockContext ctx(space_of("2"), q, 4);
    for (int n = 1; n <= 2; ++n) {
      const auto x = random_balanced(ctx, n, rng);
      EXPECT_EQ(x.length(), n);
      for (int m = 0; m < n; ++m) EXPECT_EQ(x.realized().block(m, m).norm(), 0.0);
      EXPECT_GT(x.realized().block(n, n).norm(), 0.0);
    }
  }
  const FockContext ctx(space_of("2"), 0.1, 3);
  EXPECT_THROW(length_element(ctx, 1, 0, Matrix::Zero(2, 2)), std::invalid_argument);
  EXPECT_THROW(monomial(ctx, random_list(2, 1, rng), {}).length(), std::logic_error);
}

TEST(BalancedElement, BlockDiagonal) {
  Rng rng(5);
  const FockContext ctx(space_of("2,1"), -0.3, 3);
  const BalancedElement x({random_balanced(ctx, 0, rng), random_balanced(ctx, 1, rng)});
  for (const auto& [key, b] : x.realized().blocks()) EXPECT_EQ(key.first, key.second);
  EXPECT_THROW(BalancedElement({monomial(ctx, random_list(3, 1, rng), {})}), std::invalid_argument);
}

TEST(DegreeExpectation, Examples) {
  Rng rng(6);
  const FockContext ctx(space_of("2,1"), 0.5, 3);
  const Vector u = random_vector(3, rng), v = random_vector(3, rng), w = random_vector(3, rng);
  const auto ad = creation(ctx, u);
  EXPECT_EQ(q_operator_norm(degree_expectation(ad), ctx), 0.0);
  const auto balanced = creation(ctx, v) * annihilation(ctx, w);
  EXPECT_LE(window_residual(degree_expectation(balanced + ad), balanced, ctx, 3), 1e-15);
  EXPECT_LE(window_residual(degree_expectation(balanced), balanced, ctx, 3), 0.0);
}

TEST(DegreeExpectation, Properties) {
  Rng rng(7);
  for (double q : q_grid()) {
    const FockContext ctx(space_of("2,1"), q, 3);
    const auto x = creation(ctx, random_vector(3, rng)) + annihilation(ctx, random_vector(3, rng)) +
                   creation(ctx, random_vector(3, rng)) * creation(ctx, random_vector(3, rng));
    const auto e = degree_expectation(x);
    EXPECT_LE(window_residual(degree_expectation(e), e, ctx, 3), 1e-12);
    EXPECT_LE(window_residual(degree_expectation(ctx.identity()), ctx.identity(), ctx, 3), 1e-12);
    const auto pos = q_adjoint(x, ctx) * x;
    EXPECT_GE(q_min_eigenvalue(degree_expectation(pos), ctx, 3), -1e-12);
    EXPECT_NEAR(std::abs(degree_expectation(pos).block(0, 0)(0, 0) - pos.block(0, 0)(0, 0)), 0.0, 1e-12);
  }
}

TEST(Flip, Examples) {
  EXPECT_TRUE(flip(3, 1).isApprox(Matrix::Identity(3, 3)));
  Rng rng(8);
  const Vector a = random_vector(2, rng), b = random_vector(2, rng);
  EXPECT_LE((flip(2, 2) * kron(a, b) - kron(b, a)).norm(), 1e-15);
  for (int n = 0; n <= 3; ++n) {
    const Matrix f = flip(2, n);
    EXPECT_TRUE((f * f).isApprox(Matrix::Identity(f.rows(), f.cols())));
  }
  const Vector c = random_vector(2, rng);
  const std::vector<Vector> abc{a, b, c}, cba{c, b, a};
  EXPECT_LE((flip(2, 3) * simple_tensor(abc) - simple_tensor(cba)).norm(), 1e-14);
}

TEST(Flip, PairingIdentity) {
  Rng rng(9);
  for (const char* spec : {"1,1", "2"}) {
    const auto space = space_of(spec);
    const FockContext free_ctx(space, 0.0, 4);
    for (int n = 1; n <= 2; ++n) {
      const auto v = random_list(2, n, rng), w = random_list(2, n, rng);
      const Vector e = random_vector(free_ctx.block_size(n), rng);
      EXPECT_LE(flip_pairing_residual(free_ctx, v, w, e, true), 1e-10);
    }
    // For q ≠ 0 the identity holds with the q-deformed pairing, not the plain one.
    for (double q : {-0.5, 0.5, 0.9}) {
      const FockContext ctx(space, q, 4);
      const auto v = random_list(2, 2, rng), w = random_list(2, 2, rng);
      const Vector e = random_vector(4, rng);
      EXPECT_LE(flip_pairing_residual(ctx, v, w, e), 1e-10) << spec << " q=" << q;
      EXPECT_GT(flip_pairing_residual(ctx, v, w, e, true), 1e-3) << spec << " q=" << q;
    }
  }
}

TEST(Compression, WholeSpaceIsIdentity) {
  Rng rng(10);
  const FockContext ctx(space_of("2,1"), 0.3, 3);
  const Compression c(ctx, {0, 1, 2});
  const auto x = creation(ctx, random_vector(3, rng)) * annihilation(ctx, random_vector(3, rng));
  EXPECT_LE(window_residual(c(x), x, ctx, 3), 1e-12);
}

TEST(Compression, CreationFromSubspace) {
  Rng rng(11);
  for (double q : q_grid()) {
    const FockContext ctx(space_of("2,1"), q, 3);
    const Compression c(ctx, {0, 1});
    const Vector vk = random_vector(2, rng);
    const Vector v = c.inclusion() * vk;
    EXPECT_LE(window_residual(c(creation(ctx, v)), creation(c.subspace(), vk), c.subspace(), 3), 1e-12);
  }
}

TEST(Compression, MultiplicativeOnSubspaceGenerators) {
  Rng rng(12);
  for (double q : q_grid()) {
    const FockContext ctx(space_of("2,3"), q, 3);
    const Compression c(ctx, {2, 3});
    const auto gen = [&] {
      const Vector v = c.inclusion() * random_vector(2, rng), w = c.inclusion() * random_vector(2, rng);
      return creation(ctx, v) + annihilation(ctx, w) + creation(ctx, v) * annihilation(ctx, w);
    };
    const auto x = gen(), y = gen();
    const auto& sub = c.subspace();
    EXPECT_LE(window_residual(c(x * y), c(x) * c(y), sub, 2), 1e-9 * (1.0 + q_operator_norm(c(x * y), sub))) << q;
  }
}

TEST(Compression, RejectsNonInvariantSubspace) {
  const FockContext ctx(space_of("2,1"), 0.3, 2);
  EXPECT_THROW(Compression(ctx, {0}), std::invalid_argument);
  EXPECT_NO_THROW(Compression(ctx, {2}));
}

TEST(FinkernelRank, SmallCases) {
  const FockContext ctx(space_of("1,1"), 0.0, 2);
  const auto zero = finkernel_rank(Compression(ctx, {0}), 0);
  EXPECT_EQ(zero.columns, 1);
  EXPECT_EQ(zero.rank, 1);
  // Id, a*, a for a one-dimensional K.
  const auto one = finkernel_rank(Compression(ctx, {0}), 1);
  EXPECT_EQ(one.columns, 3);
  EXPECT_EQ(one.rank, 3);
  EXPECT_TRUE(one.full());
  EXPECT_THROW(finkernel_rank(Compression(ctx, {0}), 2), std::invalid_argument);
}

TEST(FinkernelRank, FullAcrossGrid) {
  for (double q : q_grid()) {
    for (const auto& [spec, k] : std::vector<std::pair<std::string, std::vector<int>>>{
             {"1,1", {0}}, {"2,1", {0, 1}}, {"2,1", {2}}, {"1,1,1", {0, 1}}}) {
      const FockContext ctx(space_of(spec), q, 4);
      const auto report = finkernel_rank(Compression(ctx, k), 2);
      EXPECT_TRUE(report.full()) << spec << " q=" << q << " rank " << report.rank << "/" << report.columns;
    }
  }
}

TEST(CompressionIdentity, Cases) {
  Rng rng(13);
  const FockContext ctx0(space_of("2"), 0.5, 4);
  EXPECT_EQ(compression_identity_residual(ctx0, random_balanced(ctx0, 2, rng), 0), 0.0);
  for (double q : {-0.5, 0.5, 0.9}) {
    for (const char* spec : {"1", "2", "1,1"}) {
      const FockContext ctx(space_of(spec), q, 4);
      const int d = ctx.dim();
      const auto x = monomial(ctx, random_list(d, 1, rng), random_list(d, 1, rng));
      EXPECT_LE(compression_identity_residual(ctx, x, 1), 1e-10) << spec << " q=" << q;
      EXPECT_LE(compression_identity_residual(ctx, random_balanced(ctx, 2, rng), 2), 1e-9) << spec << " q=" << q;
    }
  }
  EXPECT_THROW(compression_identity_residual(ctx0, random_balanced(ctx0, 2, rng), 3), std::out_of_range);
}

TEST(NormBound, Margins) {
  Rng rng(14);
  const FockContext free_ctx(space_of("2"), 0.0, 4);
  for (int n = 0; n <= 2; ++n) EXPECT_GE(norm_bound_margin(free_ctx, random_balanced(free_ctx, n, rng)), -1e-12);
  EXPECT_NEAR(norm_constant(0.5), 3.4627466194550363, 1e-12);
  for (double q : q_grid()) {
    const FockContext ctx(space_of("2"), q, 5);
    for (int i = 0; i < 3; ++i) EXPECT_GE(norm_bound_margin(ctx, random_balanced(ctx, 2, rng)), -1e-8) << q;
  }
}

TEST(Majorisation, TrivialCases) {
  Rng rng(15);
  const Matrix r = random_matrix(4, 4, rng);
  const Matrix b = r.adjoint() * r;
  auto rep = majorisation_check(b, b, Matrix::Identity(4, 4));
  EXPECT_TRUE(rep.consistent);
  EXPECT_NEAR(rep.margin, 0.0, 1e-10);
  const Matrix a = b / (1.1 * spectral_norm(b));
  rep = majorisation_check(a, Matrix::Identity(4, 4), a);
  EXPECT_TRUE(rep.consistent);
  EXPECT_GE(rep.margin, -1e-12);
  EXPECT_FALSE(majorisation_check(a, b, Matrix::Identity(4, 4)).consistent);
  EXPECT_THROW(majorisation_check(a, Matrix::Identity(3, 3), a), std::invalid_argument);
}

TEST(Majorisation, SymmetrizerInstance) {
  for (double q : q_grid()) {
    const FockContext ctx(space_of("1,1"), q, 5);
    for (int n = 1; n <= 4; ++n)
      for (int k = 1; n + k <= 5; ++k) {
        const auto rep = symmetrizer_majorisation(ctx, n, k);
        EXPECT_TRUE(rep.consistent) << q << " " << n << " " << k;
        EXPECT_GE(rep.margin, -1e-10);
        EXPECT_LE(rep.t_norm, norm_constant(q) + 1e-10);
      }
  }
}
