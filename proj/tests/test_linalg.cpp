#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "symcone/instances.hpp"
#include "symcone/linalg.hpp"

using namespace symcone;

namespace {

QVector v(std::initializer_list<long> xs) { return make_qvector(xs); }

Rational random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-20, 20), den(1, 9);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

QMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols) {
  QMatrix m(cols);
  std::uniform_int_distribution<int> coin(0, 2);
  for (std::size_t i = 0; i < rows; ++i) {
    QVector r(cols);
    for (auto& x : r) x = coin(rng) == 0 ? Rational(0) : random_rational(rng);
    m.push_back(r);
  }
  // make some rows dependent
  if (rows >= 3) m[rows - 1] = add(m[0], scale(Rational(3, 2), m[1]));
  return m;
}

}  // namespace

TEST(Rank, Identity) { EXPECT_EQ(rank(QMatrix::identity(3)), 3u); }

TEST(Rank, ProportionalRows) { EXPECT_EQ(rank(QMatrix({v({1, 1, 0}), v({2, 2, 0})})), 1u); }

TEST(Rank, EmptyIsZero) { EXPECT_EQ(rank(QMatrix(4)), 0u); }

TEST(Rank, Cut4TriangleNormals) {
  auto met = generate_metric_cone(4);
  ASSERT_EQ(met.cone.facets.size(), 12u);
  std::vector<oracle::Vec> rows(met.cone.facets.begin(), met.cone.facets.end());
  const std::size_t expected = oracle::rank(rows);
  EXPECT_EQ(expected, 6u);
  EXPECT_EQ(rank(met.cone.matrix()), expected);
}

TEST(Nullspace, SingleRow) {
  auto ns = nullspace(QMatrix({v({1, 0, 0})}));
  ASSERT_EQ(ns.rows(), 2u);
  for (const auto& r : ns) EXPECT_EQ(r[0], 0);
  EXPECT_EQ(rank(ns), 2u);
}

TEST(Nullspace, IdentityHasEmptyKernel) { EXPECT_EQ(nullspace(QMatrix::identity(3)).rows(), 0u); }

TEST(Nullspace, SymmetryForcedDirection) {
  auto ns = nullspace(QMatrix({v({1, -1, 0}), v({0, 1, -1})}));
  ASSERT_EQ(ns.rows(), 1u);
  EXPECT_EQ(ns[0], v({1, 1, 1}));
}

TEST(Solve, IdentityReturnsRhs) {
  QVector b{Rational(1, 2), Rational(-3), Rational(7, 5)};
  EXPECT_EQ(*solve(QMatrix::identity(3), b), b);
}

TEST(Solve, Underdetermined) {
  QMatrix m({v({1, 1})});
  auto x = solve(m, v({2}));
  ASSERT_TRUE(x);
  EXPECT_EQ(mul(m, *x), v({2}));
}

TEST(Solve, Inconsistent) { EXPECT_FALSE(solve(QMatrix({v({1, 0}), v({1, 0})}), v({0, 1}))); }

TEST(Solve, DimensionMismatch) { EXPECT_THROW(solve(QMatrix::identity(2), v({1})), DimensionMismatch); }

TEST(NormalizePrimitive, Examples) {
  EXPECT_EQ(normalize_primitive({Rational(2, 3), Rational(4, 3), Rational(0)}), v({1, 2, 0}));
  EXPECT_EQ(normalize_primitive(v({-1, -2})), v({1, 2}));
  EXPECT_EQ(normalize_primitive(v({5, 0, 0})), v({1, 0, 0}));
  EXPECT_THROW(normalize_primitive(v({0, 0})), std::invalid_argument);
}

TEST(MakePrimitive, KeepsOrientation) {
  EXPECT_EQ(make_primitive(v({-2, 4, 0})), v({-1, 2, 0}));
  EXPECT_EQ(make_primitive({Rational(-1, 2), Rational(1, 3)}), v({-3, 2}));
}

TEST(Property, RankNullityAndKernel) {
  std::mt19937 rng(20261016);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    const std::size_t r = dim(rng), c = dim(rng);
    QMatrix m = random_matrix(rng, r, c);
    const QMatrix ns = nullspace(m);
    ASSERT_EQ(rank(m) + ns.rows(), c);
    ASSERT_EQ(rank(m), oracle::rank(m.row_list()));
    for (const auto& k : ns)
      for (const auto& row : m) ASSERT_EQ(sgn(dot(row, k)), 0);
  }
}

TEST(Property, SolveAgreesBySubstitution) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    QMatrix m = random_matrix(rng, dim(rng), dim(rng));
    QVector x(m.cols());
    for (auto& e : x) e = random_rational(rng);
    QVector b = mul(m, x);
    auto y = solve(m, b);
    ASSERT_TRUE(y);
    ASSERT_EQ(mul(m, *y), b);
  }
}

TEST(Property, NormalizePrimitiveScaleInvariant) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    QVector x(4);
    for (auto& e : x) e = random_rational(rng);
    if (is_zero(x)) continue;
    Rational lambda = random_rational(rng);
    if (sgn(lambda) == 0) continue;
    const QVector n = normalize_primitive(x);
    ASSERT_EQ(normalize_primitive(scale(lambda, x)), n);
    ASSERT_EQ(normalize_primitive(n), n);
  }
}

TEST(Property, ArithmeticRoundTrip) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    Rational a = random_rational(rng), b = random_rational(rng);
    ASSERT_EQ((a + b) - b, a);
  }
}
