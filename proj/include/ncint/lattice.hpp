#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ncint/band_operator.hpp"
#include "ncint/errors.hpp"
#include "ncint/jet.hpp"
#include "ncint/matpoly.hpp"
#include "ncint/moments.hpp"
#include "ncint/mops.hpp"
#include "ncint/residual_report.hpp"

namespace ncint {

namespace detail {
inline void require_flow(const MomentJetTable &t, std::size_t k, std::size_t min_order) {
  if (k != 0 && t.flow_index != k)
    throw DimensionMismatch("expected jets of the t_" + std::to_string(k) + " flow, got t_" +
                            std::to_string(t.flow_index));
  if (t.order < min_order)
    throw OrderExceeded("suite needs jets of order >= " + std::to_string(min_order) + ", got " +
                        std::to_string(t.order));
}

inline MomentTable values_of(const Moments<Jet> &j) {
  std::vector<Matrix> v;
  v.reserve(j.depth() + 1);
  for (const auto &x : j.all())
    v.push_back(x.value());
  return MomentTable(std::move(v));
}

inline Rational norm(const Matrix &m) { return m.max_abs(); }
inline Rational norm(const MatPoly<Matrix> &p) { return p.max_abs(); }
} // namespace detail

/// d a_n = b_{n+1} - b_n and d b_n = a_n b_n - b_n a_{n-1} along t_1,
/// n = 0..N (the second from n = 1; b_0 = 0 identically).
inline ResidualReport toda_nonlinear_residual(const MomentJetTable &t1, std::size_t N,
                                              std::size_t shift = 0) {
  detail::require_flow(t1, 1, 1);
  ResidualReport rep("toda_nonlinear");
  rep.param("N", N).param("shift", shift);
  FamilyCache<Jet> c(t1.jets);
  for (std::size_t n = 0; n <= N; ++n) {
    const long s = static_cast<long>(n);
    rep.evaluate(s, "da", [&] {
      return detail::norm(c.a(shift, n).derivative(1) -
                          (c.b(shift, n + 1).value() - c.b(shift, n).value()));
    });
    if (n == 0)
      continue;
    rep.evaluate(s, "db", [&] {
      const Matrix &a = c.a(shift, n).value(), &b = c.b(shift, n).value();
      return detail::norm(c.b(shift, n).derivative(1) -
                          (a * b - b * c.a(shift, n - 1).value()));
    });
  }
  return rep;
}

/// d(dH_n H_n^{-1}) = H_{n+1} H_n^{-1} - H_n H_{n-1}^{-1}, n = 0..N (the last
/// term absent at n = 0). Needs jets of order >= 2 of the t_1 flow of the
/// given moments.
inline ResidualReport toda_bilinear_residual(const Moments<Jet> &jets, std::size_t N,
                                             std::size_t shift = 0) {
  if (jets[0].order() < 2)
    throw OrderExceeded("bilinear Toda check needs jets of order >= 2");
  ResidualReport rep("toda_bilinear");
  rep.param("N", N).param("shift", shift);
  FamilyCache<Jet> c(jets);
  for (std::size_t n = 0; n <= N; ++n)
    rep.evaluate(static_cast<long>(n), "bilinear", [&] {
      const Jet &h = c.H(shift, n);
      const Jet u = h.differentiate() * c.H_inv(shift, n);
      Matrix rhs = c.H(shift, n + 1).value() * c.H_inv(shift, n).value();
      if (n > 0)
        rhs -= h.value() * c.H_inv(shift, n - 1).value();
      return detail::norm(u.derivative(1) - rhs);
    });
  return rep;
}

inline ResidualReport toda_bilinear_residual(const MomentJetTable &t1, std::size_t N,
                                             std::size_t shift = 0) {
  detail::require_flow(t1, 1, 2);
  return toda_bilinear_residual(t1.jets, N, shift);
}

/// Derivative of H_n along t_1 against both quasi-determinant forms, a_n
/// from the polynomial coefficients against dH_n H_n^{-1}, and the general
/// bordered derivative formula on the Hankel block itself.
inline ResidualReport hankel_derivative_residual(const MomentJetTable &t1, std::size_t N,
                                                 std::size_t shift = 0) {
  detail::require_flow(t1, 1, 1);
  ResidualReport rep("hankel_derivative");
  rep.param("N", N).param("shift", shift);
  const MomentTable v = detail::values_of(t1.jets);
  FamilyCache<Jet> c(t1.jets);
  FamilyCache<Matrix> cv(v);
  for (std::size_t n = 0; n <= N; ++n) {
    const long s = static_cast<long>(n);
    rep.evaluate(s, "form1", [&] {
      return detail::norm(c.H(shift, n).derivative(1) - hankel_derivative_forms(v, shift, n).first);
    });
    rep.evaluate(s, "form2", [&] {
      return detail::norm(c.H(shift, n).derivative(1) -
                          hankel_derivative_forms(v, shift, n).second);
    });
    rep.evaluate(s, "a_from_dH", [&] {
      // x P_n = P_{n+1} + a_n P_n + ...: compare x^n coefficients.
      const Matrix a_poly = (n > 0 ? cv.P(shift, n).coeff(n - 1) : Matrix(v.dim(), v.dim())) -
                            cv.P(shift, n + 1).coeff(n);
      return detail::norm(a_poly - c.H(shift, n).derivative(1) * cv.H_inv(shift, n));
    });
    const auto [r1, r2] = [&] {
      try {
        return std::pair<Rational, Rational>{
            check_qd_derivative(hankel_block(t1.jets, shift, n)).first.max_abs(),
            check_qd_derivative(hankel_block(t1.jets, shift, n)).second.max_abs()};
      } catch (const SingularMatrix &) {
        return std::pair<Rational, Rational>{-1, -1};
      }
    }();
    if (r1 < 0) {
      rep.record_undefined(s, "qd_derivative_row", "singular Hankel block");
      rep.record_undefined(s, "qd_derivative_col", "singular Hankel block");
    } else {
      rep.record(s, "qd_derivative_row", r1);
      rep.record(s, "qd_derivative_col", r2);
    }
  }
  return rep;
}

/// d/dt_k P_n = -(L^k)_- P_n for the block Jacobi operator L, k = 1, 2, 3,
/// on the rows where the truncated power is exact. Also d/dt_k L =
/// [L, (L^k)_-] and, for k = 2, the explicit bands of (L^2)_-.
inline ResidualReport wave_evolution_residual(const MomentJetTable &tk, std::size_t N,
                                              std::size_t shift = 0) {
  detail::require_flow(tk, 0, 1);
  const std::size_t k = tk.flow_index;
  if (k < 1 || k > 3)
    throw DimensionMismatch("wave evolution is implemented for t_1, t_2, t_3");
  ResidualReport rep("wave_t" + std::to_string(k));
  rep.param("N", N).param("k", k).param("shift", shift);

  const MomentTable v = detail::values_of(tk.jets);
  FamilyCache<Jet> c(tk.jets);
  FamilyCache<Matrix> cv(v);
  const auto p = v.dim();
  const long last = interior_last_row(N, k);

  std::vector<Matrix> a, b;
  try {
    for (std::size_t n = 0; n <= N; ++n) {
      a.push_back(cv.a(shift, n));
      b.push_back(cv.b(shift, n));
    }
  } catch (const SingularMatrix &e) {
    for (long n = 0; n <= last; ++n)
      rep.record_undefined(n, "dP", e.what());
    return rep;
  }
  const auto L = jacobi_operator(a, b, N);
  const auto lower = power(L, k).strictly_lower();

  for (long n = 0; n <= last; ++n) {
    const auto un = static_cast<std::size_t>(n);
    rep.evaluate(n, "dP", [&] {
      MatPoly<Matrix> r = time_derivative(c.P(shift, un));
      for (std::size_t m = 0; m < un; ++m)
        r = r + lower.at(un, m) * cv.P(shift, m);
      return detail::norm(r);
    });
    if (k == 2 && n >= 1) {
      rep.evaluate(n, "L2_sub1", [&] {
        return detail::norm(lower.at(un, un - 1) -
                            (a[un] * b[un] + b[un] * a[un - 1]));
      });
      if (n >= 2)
        rep.evaluate(n, "L2_sub2", [&] {
          return detail::norm(lower.at(un, un - 2) - b[un] * b[un - 1]);
        });
    }
  }

  // Lax form; both products are exact one row below the interior.
  const auto left = L * lower;
  const auto right = lower * L;
  for (long n = 0; n + 1 <= last; ++n) {
    const auto un = static_cast<std::size_t>(n);
    rep.evaluate(n, "lax", [&] {
      Rational worst = 0;
      const std::size_t lo = un >= k + 1 ? un - k - 1 : 0;
      for (std::size_t m = lo; m <= un + 1 && m <= N; ++m) {
        Matrix dL(p, p);
        if (m == un)
          dL = c.a(shift, un).derivative(1);
        else if (m + 1 == un)
          dL = c.b(shift, un).derivative(1);
        Rational r = detail::norm(dL - (left.at(un, m) - right.at(un, m)));
        if (r > worst)
          worst = r;
      }
      return worst;
    });
  }
  return rep;
}

/// The t_2 flow of the recurrence coefficients, n = 0..N:
///   d a_n = a_{n+1} b_{n+1} + b_{n+1} a_n - a_n b_n - b_n a_{n-1}
///   d b_n = a_n^2 b_n - b_n a_{n-1}^2 + b_{n+1} b_n - b_n b_{n-1}
inline ResidualReport t2_nonlinear_residual(const MomentJetTable &t2, std::size_t N,
                                            std::size_t shift = 0) {
  detail::require_flow(t2, 2, 1);
  ResidualReport rep("t2_nonlinear");
  rep.param("N", N).param("shift", shift);
  FamilyCache<Jet> c(t2.jets);
  const auto p = t2.jets.dim();
  const auto av = [&](long n) -> Matrix {
    return n < 0 ? Matrix(p, p) : c.a(shift, static_cast<std::size_t>(n)).value();
  };
  const auto bv = [&](long n) -> Matrix {
    return n < 1 ? Matrix(p, p) : c.b(shift, static_cast<std::size_t>(n)).value();
  };
  for (long n = 0; n <= static_cast<long>(N); ++n) {
    const auto un = static_cast<std::size_t>(n);
    rep.evaluate(n, "da", [&] {
      const Matrix rhs = av(n + 1) * bv(n + 1) + bv(n + 1) * av(n) - av(n) * bv(n) -
                         bv(n) * av(n - 1);
      return detail::norm(c.a(shift, un).derivative(1) - rhs);
    });
    if (n == 0)
      continue;
    rep.evaluate(n, "db", [&] {
      const Matrix rhs = av(n) * av(n) * bv(n) - bv(n) * av(n - 1) * av(n - 1) +
                         bv(n + 1) * bv(n) - bv(n) * bv(n - 1);
      return detail::norm(c.b(shift, un).derivative(1) - rhs);
    });
  }
  return rep;
}

} // namespace ncint
