#include <cmath>

#include <gtest/gtest.h>

#include "ncint/cli/runner.hpp"
#include "ncint/kdv.hpp"

using namespace ncint;

TEST(Kdv, NonCommutingFieldHasSlopeFour) {
  const auto r = kdv_limit_slope(default_kdv_field(false), 0.3L, {0.1L, 0.05L, 0.025L, 0.0125L});
  EXPECT_FALSE(r.all_zero);
  EXPECT_NEAR(static_cast<double>(r.slope), 4.0, 0.3);
}

TEST(Kdv, ScalarFieldHasSlopeFive) {
  const auto r = kdv_limit_slope(default_kdv_field(true), 0.3L, {0.1L, 0.05L, 0.025L, 0.0125L});
  EXPECT_NEAR(static_cast<double>(r.slope), 5.0, 0.3);
}

TEST(Kdv, LeadingTermIsHalfTheCommutator) {
  // D(eps) / eps^4 -> (r_xx r - r r_xx) / 2
  const auto f = default_kdv_field(false);
  const long double x = 0.3L, eps = 1e-3L;
  const KdvMatrix rxx = f.derivative(x, 2), rv = f(x);
  const long double predicted = ((rxx * rv - rv * rxx) / 2).cwiseAbs().maxCoeff();
  EXPECT_NEAR(static_cast<double>(kdv_defect(f, x, eps) / (eps * eps * eps * eps)),
              static_cast<double>(predicted), 1e-2 * static_cast<double>(predicted));
}

TEST(Kdv, ConstantFieldIsExactlyZero) {
  MatrixPolynomialField f;
  KdvMatrix c(2, 2);
  c << 1, 2, 3, 4;
  f.coeffs = {c};
  const auto r = kdv_limit_slope(f, 0.3L, halving_steps(0.1L, 4));
  EXPECT_TRUE(r.all_zero);
  EXPECT_TRUE(std::isnan(static_cast<double>(r.slope)));
}

TEST(Kdv, ExactPolynomialDerivatives) {
  MatrixPolynomialField f;
  for (long double c : {1.0L, 2.0L, 3.0L, 4.0L}) {
    KdvMatrix m(1, 1);
    m(0, 0) = c;
    f.coeffs.push_back(m);
  }
  // 1 + 2x + 3x^2 + 4x^3
  EXPECT_DOUBLE_EQ(static_cast<double>(f(2.0L)(0, 0)), 49.0);
  EXPECT_DOUBLE_EQ(static_cast<double>(f.derivative(2.0L, 1)(0, 0)), 2 + 12 + 48);
  EXPECT_DOUBLE_EQ(static_cast<double>(f.derivative(2.0L, 3)(0, 0)), 24.0);
  EXPECT_DOUBLE_EQ(static_cast<double>(f.derivative(2.0L, 4)(0, 0)), 0.0);
}

TEST(Kdv, RejectsBadInput) {
  EXPECT_THROW(kdv_limit_slope(default_kdv_field(true), 0.3L, {0.1L}), DimensionMismatch);
  EXPECT_THROW(kdv_limit_slope(default_kdv_field(true), 0.3L, {0.1L, -0.1L}), DimensionMismatch);
}

TEST(Kdv, LargerBlocksKeepSlopeFour) {
  const auto r = kdv_limit_slope(cli::kdv_field_for(3), 0.3L, halving_steps(0.1L, 4));
  EXPECT_NEAR(static_cast<double>(r.slope), 4.0, 0.3);
}
