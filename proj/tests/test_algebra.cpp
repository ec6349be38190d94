#include <gtest/gtest.h>

#include "ncint/jet.hpp"
#include "ncint/matrix.hpp"
#include "ncint/random.hpp"
#include "ncint/rational.hpp"
#include "oracles.hpp"

using namespace ncint;

TEST(Rational, ParsesFractionsAndIntegers) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(parse_rational("+4/8"), Rational(1, 2));
  EXPECT_EQ(to_string(parse_rational("10/4")), "5/2");
}

TEST(Rational, RejectsMalformed) {
  for (const char *bad : {"", "1/0", "1.5", "a/b", "1/", "/2", "1 /2", "0x10", "4/-8"})
    EXPECT_THROW(parse_rational(bad), ParseError) << bad;
}

TEST(Matrix, ProductAndIdentity) {
  const Matrix a{{1, 2}, {3, 4}};
  const Matrix b{{0, 1}, {1, 0}};
  EXPECT_EQ(a * b, (Matrix{{2, 1}, {4, 3}}));
  EXPECT_EQ(a * Matrix::identity(2), a);
  EXPECT_EQ(a.transpose(), (Matrix{{1, 3}, {2, 4}}));
  EXPECT_THROW(a * Matrix(3, 1), DimensionMismatch);
}

TEST(Matrix, InverseOfTwoByTwo) {
  const Matrix a{{1, 2}, {3, 4}};
  EXPECT_EQ(inverse(a), (Matrix{{-2, 1}, {Rational(3, 2), Rational(-1, 2)}}));
}

TEST(Matrix, SingularThrows) {
  EXPECT_THROW(inverse(Matrix{{1, 2}, {2, 4}}), SingularMatrix);
  EXPECT_THROW(inverse(Matrix(2, 2)), SingularMatrix);
}

TEST(Matrix, PivotingHandlesZeroLeadingEntry) {
  const Matrix a{{0, 1}, {1, 0}};
  EXPECT_EQ(inverse(a), a);
}

TEST(Matrix, MaxAbsIsExact) {
  EXPECT_EQ((Matrix{{Rational(-7, 3), 2}, {0, 1}}).max_abs(), Rational(7, 3));
}

TEST(MatrixProperty, InverseTimesSelfIsIdentity) {
  SeededRng rng(101);
  int checked = 0;
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform(0, 5));
    const Matrix a = random_matrix(rng, n, n);
    if (sgn(oracle::det(a)) == 0) {
      EXPECT_THROW(inverse(a), SingularMatrix);
      continue;
    }
    EXPECT_EQ(a * inverse(a), Matrix::identity(n));
    ++checked;
  }
  EXPECT_GT(checked, 40);
}

TEST(MatrixProperty, SolveMatchesCramer) {
  SeededRng rng(102);
  for (int k = 0; k < 30; ++k) {
    const Matrix a = random_matrix(rng, 3, 3);
    const Matrix b = random_matrix(rng, 3, 1);
    const Rational d = oracle::det(a);
    if (sgn(d) == 0)
      continue;
    const Matrix x = solve(a, b);
    for (std::size_t i = 0; i < 3; ++i) {
      Matrix ai = a;
      for (std::size_t r = 0; r < 3; ++r)
        ai(r, i) = b(r, 0);
      EXPECT_EQ(x(i, 0), oracle::det(ai) / d);
    }
  }
}

TEST(Jet, ProductIsTruncatedCauchyProduct) {
  const Matrix a{{1, 1}, {0, 1}}, b{{0, 1}, {1, 0}};
  const Jet x({Matrix::identity(2), a});     // I + a e
  const Jet y({Matrix::identity(2), b, a}); // I + b e + a e^2
  const Jet z = x * y;
  EXPECT_EQ(z.order(), 1u);
  EXPECT_EQ(z.coeff(1), a + b);
  EXPECT_THROW(z.coeff(2), OrderExceeded);
}

TEST(Jet, DerivativeUsesFactorial) {
  const Matrix c{{2}};
  const Jet j({Matrix{{0}}, Matrix{{0}}, Matrix{{0}}, c});
  EXPECT_EQ(j.derivative(3), (Matrix{{12}}));
  EXPECT_EQ(j.differentiate().coeff(2), (Matrix{{6}}));
}

TEST(JetProperty, InverseAndLeibniz) {
  SeededRng rng(103);
  for (int k = 0; k < 25; ++k) {
    const std::size_t p = 1 + static_cast<std::size_t>(rng.uniform(0, 2));
    const Jet a = random_jet(rng, p, 3);
    const Jet b = random_jet(rng, p, 3);
    // Product rule at first and second order.
    const Jet ab = a * b;
    EXPECT_EQ(ab.derivative(1), a.derivative(1) * b.value() + a.value() * b.derivative(1));
    EXPECT_EQ(ab.derivative(2), a.derivative(2) * b.value() +
                                    Rational(2) * (a.derivative(1) * b.derivative(1)) +
                                    a.value() * b.derivative(2));
    if (sgn(oracle::det(a.value())) == 0) {
      EXPECT_THROW(inverse(a), SingularMatrix);
      continue;
    }
    EXPECT_EQ(a * inverse(a), Jet::identity(p, 3));
    EXPECT_EQ(inverse(a) * a, Jet::identity(p, 3));
  }
}
