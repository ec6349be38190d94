#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ncint/band_operator.hpp"
#include "ncint/errors.hpp"
#include "ncint/matpoly.hpp"
#include "ncint/moments.hpp"
#include "ncint/mops.hpp"
#include "ncint/residual_report.hpp"

namespace ncint {

/// How a polynomial identity is checked: coefficient by coefficient, or by
/// evaluation at degree + 2 distinct rational points.
enum class IdentityMode { Coefficients, Points };

inline Rational polynomial_residual(const MatPoly<Matrix> &r,
                                    IdentityMode mode = IdentityMode::Coefficients) {
  if (mode == IdentityMode::Coefficients)
    return r.max_abs();
  Rational worst = 0;
  for (std::size_t k = 0; k < r.degree() + 2; ++k) {
    // 0, 1, -1/2, 2, -2/3, ...
    Rational x = k == 0 ? Rational(0)
                        : (k % 2 ? Rational(static_cast<long>(k / 2 + 1))
                                 : Rational(-1, static_cast<long>(k / 2 + 1)));
    x.canonicalize();
    Rational v = r.evaluate(x).max_abs();
    if (v > worst)
      worst = v;
  }
  return worst;
}

/// H_{n+1}^{(l)} = H_n^{(l+2)} - H_n^{(l+1)} ((H_n^{(l)})^{-1} - (H_{n-1}^{(l+2)})^{-1}) H_n^{(l+1)},
/// n = 0..N, the H_{-1} term absent at n = 0.
inline ResidualReport discrete_toda_residual(const MomentTable &m, std::size_t N,
                                             std::size_t shift = 0) {
  ResidualReport rep("discrete_toda");
  rep.param("N", N).param("shift", shift);
  FamilyCache<Matrix> c(m);
  for (std::size_t n = 0; n <= N; ++n)
    rep.evaluate(static_cast<long>(n), "ncdt", [&] {
      Matrix mid = c.H_inv(shift, n);
      if (n > 0)
        mid -= c.H_inv(shift + 2, n - 1);
      const Matrix &h1 = c.H(shift + 1, n);
      return (c.H(shift, n + 1) - (c.H(shift + 2, n) - h1 * mid * h1)).max_abs();
    });
  return rep;
}

/// P_n^{(l)} = x P_{n-1}^{(l+2)} - A_n^l P_{n-1}^{(l+1)}, n = 1..N.
inline ResidualReport christoffel_residual(const MomentTable &m, std::size_t N,
                                           std::size_t shift = 0,
                                           IdentityMode mode = IdentityMode::Coefficients) {
  ResidualReport rep("christoffel");
  rep.param("N", N).param("shift", shift);
  FamilyCache<Matrix> c(m);
  for (std::size_t n = 1; n <= N; ++n)
    rep.evaluate(static_cast<long>(n), "christoffel", [&] {
      const auto r = c.P(shift, n) -
                     (c.P(shift + 2, n - 1).times_x() - c.A(shift, n) * c.P(shift + 1, n - 1));
      return polynomial_residual(r, mode);
    });
  return rep;
}

/// x P_n^{(l+1)} = P_{n+1}^{(l)} + B_n^l P_n^{(l)}, n = 0..N.
inline ResidualReport geronimus_residual(const MomentTable &m, std::size_t N,
                                         std::size_t shift = 0,
                                         IdentityMode mode = IdentityMode::Coefficients) {
  ResidualReport rep("geronimus");
  rep.param("N", N).param("shift", shift);
  FamilyCache<Matrix> c(m);
  for (std::size_t n = 0; n <= N; ++n)
    rep.evaluate(static_cast<long>(n), "geronimus", [&] {
      const auto r = c.P(shift + 1, n).times_x() -
                     (c.P(shift, n + 1) + c.B(shift, n) * c.P(shift, n));
      return polynomial_residual(r, mode);
    });
  return rep;
}

/// Bidiagonal operator with the identity on the diagonal and
/// B_{n-1}^{l+1} - A_n^l below it, rows 0..last.
inline BandOperator<Matrix> christoffel_operator(FamilyCache<Matrix> &c, std::size_t shift,
                                                 std::size_t last) {
  const auto p = c.dim();
  BandOperator<Matrix> op(last, Matrix(p, p));
  for (std::size_t n = 0; n <= last; ++n) {
    op.set(n, 0, Matrix::identity(p));
    if (n > 0)
      op.set(n, -1, c.B(shift + 1, n - 1) - c.A(shift, n));
  }
  return op;
}

/// Compatibility of the two transforms at level l >= 1:
///   n1:  P_n^{(l)} = P_n^{(l+1)} + (B_{n-1}^{l+1} - A_n^l) P_{n-1}^{(l+1)}
///   ML:  M^{(l+1)} L^{(l+1)} = L^{(l)} M^{(l+1)} on exact rows
///   AB1: B_{n-1}^{l+1} - A_n^l = B_n^{l-1} - A_{n+1}^{l-1}
///   AB2: (B_n^{l+1} - A_{n+1}^l) B_n^l = B_{n+1}^{l-1} (B_n^l - A_{n+1}^{l-1})
///   rec: the three-term recurrence of P^{(l)} composed from the transforms,
///        x P_n = P_{n+1} + (B_n^l + B_n^{l-1} - A_{n+1}^{l-1}) P_n
///                + B_n^{l-1} (B_{n-1}^l - A_n^{l-1}) P_{n-1}
inline ResidualReport discrete_compatibility_residual(
    const MomentTable &m, std::size_t N, std::size_t shift = 1,
    IdentityMode mode = IdentityMode::Coefficients) {
  if (shift < 1)
    throw DimensionMismatch("compatibility checks need shift >= 1");
  ResidualReport rep("discrete_compat");
  rep.param("N", N).param("shift", shift);
  FamilyCache<Matrix> c(m);
  const std::size_t l = shift;

  for (std::size_t n = 1; n <= N; ++n)
    rep.evaluate(static_cast<long>(n), "n1", [&] {
      const auto r = c.P(l, n) - (c.P(l + 1, n) + (c.B(l + 1, n - 1) - c.A(l, n)) *
                                                      c.P(l + 1, n - 1));
      return polynomial_residual(r, mode);
    });

  try {
    std::vector<Matrix> a0, b0, a1, b1;
    for (std::size_t n = 0; n <= N; ++n) {
      a0.push_back(c.a(l, n));
      b0.push_back(c.b(l, n));
      a1.push_back(c.a(l + 1, n));
      b1.push_back(c.b(l + 1, n));
    }
    const auto M = christoffel_operator(c, l, N);
    const auto lhs = M * jacobi_operator(a1, b1, N);
    const auto rhs = jacobi_operator(a0, b0, N) * M;
    for (std::size_t n = 0; n + 1 <= N; ++n) {
      Rational worst = 0;
      for (std::size_t col = n >= 2 ? n - 2 : 0; col <= n + 1; ++col) {
        Rational r = (lhs.at(n, col) - rhs.at(n, col)).max_abs();
        if (r > worst)
          worst = r;
      }
      rep.record(static_cast<long>(n), "ML", worst);
    }
  } catch (const SingularMatrix &e) {
    rep.record_undefined(0, "ML", e.what());
  }

  for (std::size_t n = 1; n <= N; ++n)
    rep.evaluate(static_cast<long>(n), "AB1", [&] {
      return ((c.B(l + 1, n - 1) - c.A(l, n)) - (c.B(l - 1, n) - c.A(l - 1, n + 1))).max_abs();
    });
  for (std::size_t n = 0; n <= N; ++n)
    rep.evaluate(static_cast<long>(n), "AB2", [&] {
      return ((c.B(l + 1, n) - c.A(l, n + 1)) * c.B(l, n) -
              c.B(l - 1, n + 1) * (c.B(l, n) - c.A(l - 1, n + 1)))
          .max_abs();
    });

  for (std::size_t n = 0; n <= N; ++n)
    rep.evaluate(static_cast<long>(n), "rec", [&]() -> Rational {
      const Matrix an = c.B(l, n) + c.B(l - 1, n) - c.A(l - 1, n + 1);
      auto r = c.P(l, n).times_x() - (c.P(l, n + 1) + an * c.P(l, n));
      if (n > 0)
        r = r - (c.B(l - 1, n) * (c.B(l, n - 1) - c.A(l - 1, n))) * c.P(l, n - 1);
      return polynomial_residual(r, mode) +
             (an - c.a(l, n)).max_abs() +
             (n > 0 ? (c.B(l - 1, n) * (c.B(l, n - 1) - c.A(l - 1, n)) - c.b(l, n)).max_abs()
                    : Rational(0));
    });
  return rep;
}

} // namespace ncint
