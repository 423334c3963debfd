#include "qfock/wick.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace qfock;
using qfock::testing::q_grid;
using qfock::testing::random_real_vector;
using qfock::testing::space_of;

namespace {

// Oracle: the crossing-weighted sum built from explicit products of single
// creation and annihilation operators.
GradedOperator wick_by_products(const FockContext& ctx, const std::vector<Vector>& e) {
  const int n = static_cast<int>(e.size());
  GradedOperator sum = ctx.zero_operator();
  for (const auto& part : crossing_partitions(n)) {
    GradedOperator term = ctx.identity();
    for (int i : part.first) term = term * creation(ctx, e[static_cast<std::size_t>(i - 1)]);
    for (int j : part.second) term = term * annihilation(ctx, ctx.space().conjugate(e[static_cast<std::size_t>(j - 1)]));
    sum += std::pow(ctx.q(), crossing_number(part)) * term;
  }
  return sum;
}

std::vector<Vector> random_factors(const FockContext& ctx, int n, Rng& rng) {
  std::vector<Vector> e;
  for (int i = 0; i < n; ++i) e.push_back(random_vector(ctx.dim(), rng));
  return e;
}

GradedVector random_tensor(const FockContext& ctx, int degree, Rng& rng) {
  GradedVector v = ctx.zero_vector();
  for (int n = 0; n <= degree; ++n) v.block(n) = random_vector(ctx.block_size(n), rng);
  return v;
}

}  // namespace

TEST(CrossingNumber, Examples) {
  EXPECT_EQ(crossing_number({{1, 2, 3}, {4, 5}}), 0);
  EXPECT_EQ(crossing_number({{}, {1, 2}}), 0);
  EXPECT_EQ(crossing_number({{2}, {1}}), 1);
  EXPECT_EQ(crossing_number({{1, 3}, {2, 4}}), 1);
  EXPECT_EQ(crossing_number({{3, 4}, {1, 2}}), 4);
  EXPECT_THROW(crossing_number({{1, 1}, {2}}), std::invalid_argument);
  EXPECT_THROW(crossing_number({{2, 1}, {3}}), std::invalid_argument);
  EXPECT_THROW(crossing_number({{1}, {3}}), std::invalid_argument);
}

TEST(CrossingNumber, CountsPairsOutOfOrder) {
  for (const auto& p : crossing_partitions(6)) {
    int pairs = 0;
    for (int i : p.first)
      for (int j : p.second)
        if (j < i) ++pairs;
    EXPECT_EQ(crossing_number(p), pairs);
  }
  EXPECT_EQ(crossing_partitions(5).size(), 32u);
  EXPECT_EQ(crossing_partitions(5, 2).size(), 10u);
  EXPECT_TRUE(crossing_partitions(3).front().first.empty());
}

TEST(WickWord, DegreeZeroIsIdentity) {
  const FockContext ctx(space_of("2,1"), 0.4, 3);
  const auto w = wick_word(ctx, ctx.vacuum());
  EXPECT_LE(window_residual(w.realized(), ctx.identity(), ctx, 3), 1e-15);
  EXPECT_EQ(w.degree(), 0);
}

TEST(WickWord, DegreeOneOfRealVectorIsSemicircular) {
  Rng rng(1);
  for (double q : q_grid()) {
    const FockContext ctx(space_of("2,1"), q, 3);
    const Vector h = random_real_vector(ctx.space(), rng);
    const std::vector<Vector> f{h};
    const auto w = wick_word(ctx, f);
    EXPECT_LE(window_residual(w.realized(), s_q(ctx, h), ctx, 2), 1e-12);
  }
}

TEST(WickWord, FreeDegreeTwoOneDimensional) {
  const FockContext ctx(space_of("1"), 0.0, 4);
  Vector e(1);
  e << 1.0;
  const auto a = annihilation(ctx, e), ad = creation(ctx, e);
  // At q = 0 only the crossing-free partitions contribute: a*a*, a*a, aa.
  const auto expected = ad * ad + ad * a + a * a;
  const std::vector<Vector> f{e, e};
  const auto w = wick_word(ctx, f);
  EXPECT_LE(window_residual(w.realized(), expected, ctx, 2), 1e-14);
  EXPECT_LE(q_norm(ctx, w.realized().apply(ctx.vacuum()) - GradedVector::homogeneous(1, 4, 2, kron(e, e))), 1e-15);
}

TEST(WickWord, MatchesExplicitProductsOfCreationsAndAnnihilations) {
  Rng rng(2);
  for (const char* spec : {"1", "2", "2,1"}) {
    for (double q : q_grid()) {
      const FockContext ctx(space_of(spec), q, 4);
      for (int n = 1; n <= 3; ++n) {
        const auto e = random_factors(ctx, n, rng);
        const auto w = wick_word(ctx, e);
        EXPECT_LE(window_residual(w.realized(), wick_by_products(ctx, e), ctx, 4 - n), 1e-10)
            << spec << " q=" << q << " n=" << n;
      }
    }
  }
}

TEST(WickWord, SemicircularRecursion) {
  // s(h)W(ξ) lies in the algebra and sends Ω to h⊗ξ + a_q(h)ξ, so it must equal W(h⊗ξ + a_q(h)ξ).
  Rng rng(3);
  for (const char* spec : {"1", "1,1", "2", "2,1"}) {
    for (double q : q_grid()) {
      const FockContext ctx(space_of(spec), q, 4);
      const Vector h = random_real_vector(ctx.space(), rng);
      const auto s = s_q(ctx, h);
      for (int n = 1; n <= 2; ++n) {
        const auto xi = GradedVector::homogeneous(ctx.dim(), 4, n, random_vector(ctx.block_size(n), rng));
        const auto lhs = s * wick_word(ctx, xi).realized();
        const auto image = creation(ctx, h).apply(xi) + annihilation(ctx, h).apply(xi);
        const auto rhs = wick_word(ctx, image).realized();
        EXPECT_LE(window_residual(lhs, rhs, ctx, 4 - (n + 1)), 1e-9) << spec << " q=" << q << " n=" << n;
      }
    }
  }
}

TEST(WickWord, ProductOfSemicircularsDegreeTwo) {
  Rng rng(4);
  for (double q : q_grid()) {
    const FockContext ctx(space_of("2,1"), q, 4);
    const Vector h1 = random_real_vector(ctx.space(), rng), h2 = random_real_vector(ctx.space(), rng);
    const std::vector<Vector> f{h1, h2};
    const auto expected = s_q(ctx, h1) * s_q(ctx, h2) - deformed_inner(ctx.space(), h1, h2) * ctx.identity();
    EXPECT_LE(window_residual(wick_word(ctx, f).realized(), expected, ctx, 2), 1e-10);
  }
}

TEST(WickWord, VacuumResidual) {
  Rng rng(5);
  const FockContext ctx(space_of("2,1"), 0.5, 4);
  EXPECT_EQ(vacuum_residual(ctx, ctx.vacuum()), 0.0);
  for (double q : q_grid()) {
    const FockContext c(space_of("2,1"), q, 4);
    for (int i = 0; i < 10; ++i) {
      const auto xi = GradedVector::homogeneous(3, 4, 2, random_vector(9, rng));
      EXPECT_LE(vacuum_residual(c, xi), 1e-10);
    }
    // Degree N: annihilation terms are cut by truncation, the vacuum image is unaffected.
    const auto top = GradedVector::homogeneous(3, 4, 4, random_vector(81, rng));
    EXPECT_LE(vacuum_residual(c, top), 1e-10);
  }
}

TEST(WickWord, RealVectorsGiveSelfAdjointWords) {
  Rng rng(6);
  for (const char* spec : {"2", "2,1"}) {
    for (double q : q_grid()) {
      const FockContext ctx(space_of(spec), q, 3);
      const std::vector<Vector> f{random_real_vector(ctx.space(), rng)};
      const auto w = wick_word(ctx, f).realized();
      EXPECT_LE(window_residual(q_adjoint(w, ctx), w, ctx, 2), 1e-10);
    }
  }
}

TEST(WickWord, Linearity) {
  Rng rng(7);
  for (double q : q_grid()) {
    const FockContext ctx(space_of("2,1"), q, 4);
    const auto xi = random_tensor(ctx, 3, rng), eta = random_tensor(ctx, 3, rng);
    const cplx alpha(0.3, -1.2), beta(-0.7, 0.4);
    const auto combined = wick_word(ctx, alpha * xi + beta * eta).realized();
    const auto separate = alpha * wick_word(ctx, xi).realized() + beta * wick_word(ctx, eta).realized();
    EXPECT_LE(window_residual(combined, separate, ctx, 4), 1e-12 * (1.0 + q_operator_norm(separate, ctx)));
  }
}

TEST(WickWord, FreeCaseHasOnlyNonCrossingTerms) {
  Rng rng(8);
  const FockContext ctx(space_of("2,1"), 0.0, 4);
  for (int n = 1; n <= 3; ++n) {
    const auto e = random_factors(ctx, n, rng);
    GradedOperator expected = ctx.zero_operator();
    for (int k = 0; k <= n; ++k) {
      GradedOperator term = ctx.identity();
      for (int i = 0; i < k; ++i) term = term * creation(ctx, e[static_cast<std::size_t>(i)]);
      for (int j = k; j < n; ++j) term = term * annihilation(ctx, ctx.space().conjugate(e[static_cast<std::size_t>(j)]));
      expected += term;
    }
    EXPECT_LE(window_residual(wick_word(ctx, e).realized(), expected, ctx, 4 - n), 1e-12);
  }
}

TEST(WickWord, DegreeOverflow) {
  const FockContext ctx(space_of("1"), 0.2, 2);
  Vector e(1);
  e << 1.0;
  const std::vector<Vector> f{e, e, e};
  EXPECT_THROW(wick_word(ctx, f), std::out_of_range);
}
