#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ncint/errors.hpp"
#include "ncint/matpoly.hpp"
#include "ncint/moments.hpp"
#include "ncint/quasidet.hpp"

namespace ncint {

/// Monic P_n^{(shift)}: the coefficients solve
///   sum_i a_{n,i} m_{shift+i+j} = -m_{shift+j+n},  j = 0..n-1
/// by one flattened exact solve.
template <class R>
MatPoly<R> build_poly(const Moments<R> &m, std::size_t shift, std::size_t n) {
  const R &proto = m[0];
  const std::size_t p = proto.rows();
  if (n == 0)
    return MatPoly<R>::monomial(proto, 0);
  const R lambda = hankel_block(m, shift, n - 1).flatten();
  std::vector<const R *> theta;
  for (std::size_t j = 0; j < n; ++j)
    theta.push_back(&m.shifted(shift, n + j));
  const R row = assemble(proto, theta, 1, n);
  R xt;
  try {
    xt = solve(transpose(lambda), transpose(row));
  } catch (const SingularMatrix &) {
    throw SingularMoment("Hankel block with shift " + std::to_string(shift) + " and " +
                         std::to_string(n) + " block rows is singular");
  }
  std::vector<R> c;
  c.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i)
    c.push_back(-transpose(block_of(xt, i * p, 0, p, p)));
  c.push_back(identity_like(proto, p));
  return MatPoly<R>(std::move(c));
}

/// <f, g>_shift = sum_{i,j} f_i m_{shift+i+j} g_j^T.
template <class R>
R inner_product(const MatPoly<R> &f, const MatPoly<R> &g, const Moments<R> &m,
                std::size_t shift = 0) {
  const std::size_t need = shift + f.degree() + g.degree();
  if (m.depth() < need)
    throw DepthExceeded("inner product needs m_" + std::to_string(need) + ", table has depth " +
                        std::to_string(m.depth()));
  R acc = zero_like(m[0], m.dim(), m.dim());
  for (std::size_t i = 0; i <= f.degree(); ++i) {
    if (is_zero(f.coeff(i)))
      continue;
    for (std::size_t j = 0; j <= g.degree(); ++j) {
      if (is_zero(g.coeff(j)))
        continue;
      acc = acc + f.coeff(i) * m.shifted(shift, i + j) * transpose(g.coeff(j));
    }
  }
  return acc;
}

/// H_n^{(shift)}: corner quasi-determinant of the (n+1)x(n+1) Hankel block.
template <class R>
R hankel_H(const Moments<R> &m, std::size_t shift, std::size_t n) {
  return quasidet_corner(hankel_block(m, shift, n));
}

/// Lambda^{(shift)}_{n-1} bordered by the column col(i), the row row(j) and
/// the corner element; (n+1)x(n+1) blocks.
template <class R, class Col, class Row>
BlockMatrix<R> bordered_hankel(const Moments<R> &m, std::size_t shift, std::size_t n, Col &&col,
                               Row &&row, const R &corner) {
  return BlockMatrix<R>::generate(n + 1, n + 1, [&](std::size_t i, std::size_t j) -> R {
    if (i < n && j < n)
      return m.shifted(shift, i + j);
    if (i < n)
      return col(i);
    if (j < n)
      return row(j);
    return corner;
  });
}

namespace detail {
template <class R>
R unit_block(const R &proto, std::size_t k, std::size_t at) {
  const auto p = proto.rows();
  return k == at ? identity_like(proto, p) : zero_like(proto, p, p);
}
} // namespace detail

/// Coefficient a_{n,i} of P_n^{(shift)} as |Lambda e_i^T; theta 0|.
template <class R>
R poly_coeff_quasidet(const Moments<R> &m, std::size_t shift, std::size_t n, std::size_t i) {
  const R &proto = m[0];
  const auto p = proto.rows();
  return quasidet_corner(bordered_hankel(
      m, shift, n, [&](std::size_t k) { return detail::unit_block(proto, k, i); },
      [&](std::size_t j) { return m.shifted(shift, n + j); }, zero_like(proto, p, p)));
}

/// P_n^{(shift)}(x) evaluated through its bordered quasi-determinant with the
/// monomial column (I, xI, ..., x^{n-1}I) and corner x^n I.
template <class R>
R poly_quasidet_at(const Moments<R> &m, std::size_t shift, std::size_t n, const Rational &x) {
  const R &proto = m[0];
  const auto p = proto.rows();
  auto power = [&](std::size_t k) {
    Rational v = 1;
    for (std::size_t s = 0; s < k; ++s)
      v *= x;
    return v * identity_like(proto, p);
  };
  return quasidet_corner(bordered_hankel(
      m, shift, n, power, [&](std::size_t j) { return m.shifted(shift, n + j); }, power(n)));
}

/// The two expressions for d/dt H_n^{(shift)} under d/dt m_i = m_{i+1},
/// evaluated on static moments:
///   |Lambda (theta_n)^T; theta_{n+1} m_{2n+1}| + |Lambda e_{n-1}^T; theta_n 0| H_n
///   |Lambda (theta_{n+1})^T; theta_n m_{2n+1}| + H_n |Lambda (theta_n)^T; e_{n-1} 0|
template <class R>
std::pair<R, R> hankel_derivative_forms(const Moments<R> &m, std::size_t shift, std::size_t n) {
  const R &proto = m[0];
  const auto p = proto.rows();
  if (n == 0)
    return {m.shifted(shift, 1), m.shifted(shift, 1)};
  const R h = hankel_H(m, shift, n);
  const R &top = m.shifted(shift, 2 * n + 1);
  const auto theta_n = [&](std::size_t k) { return m.shifted(shift, n + k); };
  const auto theta_n1 = [&](std::size_t k) { return m.shifted(shift, n + 1 + k); };
  const auto e_last = [&](std::size_t k) { return detail::unit_block(proto, k, n - 1); };
  const R zero = zero_like(proto, p, p);

  R first = quasidet_corner(bordered_hankel(m, shift, n, theta_n, theta_n1, top)) +
            quasidet_corner(bordered_hankel(m, shift, n, e_last, theta_n, zero)) * h;
  R second = quasidet_corner(bordered_hankel(m, shift, n, theta_n1, theta_n, top)) +
             h * quasidet_corner(bordered_hankel(m, shift, n, theta_n, e_last, zero));
  return {std::move(first), std::move(second)};
}

template <class R>
struct RecurrenceCoeffs {
  R a;
  R b;
};

/// a_n^{(shift)}, b_n^{(shift)} of x P_n = P_{n+1} + a_n P_n + b_n P_{n-1}
/// from their quasi-determinant expressions; b_0 = 0.
template <class R>
RecurrenceCoeffs<R> recurrence_coeffs(const Moments<R> &m, std::size_t shift, std::size_t n) {
  const R &proto = m[0];
  const auto p = proto.rows();
  const R h = hankel_H(m, shift, n);
  const R h_inv = inverse(h);
  if (n == 0)
    return {m.shifted(shift, 1) * h_inv, zero_like(proto, p, p)};
  R a = hankel_derivative_forms(m, shift, n).first * h_inv;
  R b = h * inverse(hankel_H(m, shift, n - 1));
  return {std::move(a), std::move(b)};
}

/// A_n^shift of P_n^{(l)} = x P_{n-1}^{(l+2)} - A_n^l P_{n-1}^{(l+1)}.
/// At n = 1 the (H_{-1}^{(l+2)})^{-1} term is absent.
template <class R>
R christoffel_A(const Moments<R> &m, std::size_t shift, std::size_t n) {
  if (n == 0)
    throw DimensionMismatch("christoffel_A is defined for n >= 1");
  const R h1 = hankel_H(m, shift + 1, n - 1);
  if (n == 1)
    return h1 * inverse(hankel_H(m, shift, 0));
  return h1 * (inverse(hankel_H(m, shift, n - 1)) - inverse(hankel_H(m, shift + 2, n - 2)));
}

/// B_n^shift of x P_n^{(l+1)} = P_{n+1}^{(l)} + B_n^l P_n^{(l)}.
template <class R>
R geronimus_B(const Moments<R> &m, std::size_t shift, std::size_t n) {
  return hankel_H(m, shift + 1, n) * inverse(hankel_H(m, shift, n));
}

/// Normalizations and recurrence coefficients of one adjacent family,
/// indexed 0..n_max.
template <class R>
struct FamilyData {
  std::size_t shift = 0;
  std::vector<R> H;
  std::vector<R> a;
  std::vector<R> b;
};

template <class R>
FamilyData<R> build_family(const Moments<R> &m, std::size_t shift, std::size_t n_max) {
  FamilyData<R> f;
  f.shift = shift;
  for (std::size_t n = 0; n <= n_max; ++n) {
    f.H.push_back(hankel_H(m, shift, n));
    auto rc = recurrence_coeffs(m, shift, n);
    f.a.push_back(std::move(rc.a));
    f.b.push_back(std::move(rc.b));
  }
  return f;
}

/// Coefficients of the reduced (even-measure) recurrences, built from the
/// even part d_i = m_{2i}:
///   xi_n = H_n^{(0)} (H_{n-1}^{(1)})^{-1},    n = 1..n_max
///   zeta_{n+1} = H_n^{(1)} (H_n^{(0)})^{-1},  n = 0..n_max
///   gamma_{2n} = xi_n, gamma_{2n+1} = zeta_{n+1}, gamma_0 = 0
///   alpha_n = -H_n^{(0)} (H_{n-1}^{(0)})^{-1}, beta_n = -H_n^{(1)} (H_{n-1}^{(1)})^{-1}
/// Index 0 of xi, zeta, alpha and beta holds zero and is never meaningful.
template <class R>
struct VolterraData {
  std::vector<R> H0;
  std::vector<R> H1;
  std::vector<R> xi;
  std::vector<R> zeta;
  std::vector<R> gamma;
  std::vector<R> alpha;
  std::vector<R> beta;
};

template <class R>
VolterraData<R> build_volterra(const Moments<R> &d, std::size_t n_max) {
  VolterraData<R> v;
  const R &proto = d[0];
  const R zero = zero_like(proto, proto.rows(), proto.rows());
  for (std::size_t n = 0; n <= n_max; ++n) {
    v.H0.push_back(hankel_H(d, 0, n));
    v.H1.push_back(hankel_H(d, 1, n));
  }
  std::vector<R> h0_inv, h1_inv;
  for (std::size_t n = 0; n <= n_max; ++n) {
    h0_inv.push_back(inverse(v.H0[n]));
    h1_inv.push_back(inverse(v.H1[n]));
  }
  v.xi.push_back(zero);
  v.alpha.push_back(zero);
  v.beta.push_back(zero);
  v.zeta.push_back(zero);
  for (std::size_t n = 1; n <= n_max; ++n) {
    v.xi.push_back(v.H0[n] * h1_inv[n - 1]);
    v.alpha.push_back(-(v.H0[n] * h0_inv[n - 1]));
    v.beta.push_back(-(v.H1[n] * h1_inv[n - 1]));
  }
  for (std::size_t n = 0; n <= n_max; ++n)
    v.zeta.push_back(v.H1[n] * h0_inv[n]);
  v.gamma.push_back(zero);
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0)
      v.gamma.push_back(v.xi[n]);
    v.gamma.push_back(v.zeta[n + 1]);
  }
  return v;
}

template <class R>
struct SymmetricFamily {
  /// Q_0 .. Q_{2 n_max + 1}
  std::vector<MatPoly<R>> Q;
  VolterraData<R> data;
};

/// Q_{2n}(x) = P_n^{(0)}(x^2) and Q_{2n+1}(x) = x P_n^{(1)}(x^2) over the
/// even part of an even moment table.
template <class R>
SymmetricFamily<R> build_symmetric_family(const Moments<R> &m, std::size_t n_max) {
  if (!odd_moments_vanish(m))
    throw ValidationError(ValidationIssue::NotEvenMeasure,
                          "symmetric family needs vanishing odd moments");
  const Moments<R> d = even_part(m);
  SymmetricFamily<R> out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    out.Q.push_back(build_poly(d, 0, n).compose_square());
    out.Q.push_back(build_poly(d, 1, n).compose_square().times_x());
  }
  out.data = build_volterra(d, n_max);
  return out;
}

/// The bordered quasi-determinant displayed for Q_{2n+parity}, evaluated at
/// x: Hankel of d_{parity+i+j}, last column d_{parity+n+i}, last row
/// x^{2j} I, corner x^{2n} I; multiplied by x when parity is 1. Its
/// coefficients multiply monomials from the right, so it equals
/// Q_{2n+parity}(x)^T.
template <class R>
R q_quasidet_at(const Moments<R> &d, std::size_t parity, std::size_t n, const Rational &x) {
  const R &proto = d[0];
  const auto p = proto.rows();
  auto even_power = [&](std::size_t k) {
    Rational v = 1;
    for (std::size_t s = 0; s < 2 * k; ++s)
      v *= x;
    return v * identity_like(proto, p);
  };
  R q = quasidet_corner(bordered_hankel(
      d, parity, n, [&](std::size_t i) { return d.shifted(parity, n + i); }, even_power,
      even_power(n)));
  return parity == 1 ? x * q : q;
}

/// Memoized H_n, a_n, b_n, P_n and the transform coefficients over one
/// moment table, keyed by (shift, n). Anything singular throws at first use.
template <class R>
class FamilyCache {
public:
  explicit FamilyCache(Moments<R> m) : m_(std::move(m)) {}

  const Moments<R> &moments() const noexcept { return m_; }
  std::size_t dim() const { return m_.dim(); }

  const R &H(std::size_t shift, std::size_t n) {
    return memo(H_, shift, n, [&] { return hankel_H(m_, shift, n); });
  }
  const R &H_inv(std::size_t shift, std::size_t n) {
    return memo(Hi_, shift, n, [&] { return inverse(H(shift, n)); });
  }
  const R &a(std::size_t shift, std::size_t n) {
    return memo(a_, shift, n, [&] {
      if (n == 0)
        return R(m_.shifted(shift, 1) * H_inv(shift, 0));
      return R(hankel_derivative_forms(m_, shift, n).first * H_inv(shift, n));
    });
  }
  const R &b(std::size_t shift, std::size_t n) {
    return memo(b_, shift, n, [&] {
      if (n == 0)
        return zero_like(m_[0], dim(), dim());
      return R(H(shift, n) * H_inv(shift, n - 1));
    });
  }
  const MatPoly<R> &P(std::size_t shift, std::size_t n) {
    auto key = std::make_pair(shift, n);
    auto it = P_.find(key);
    if (it == P_.end())
      it = P_.emplace(key, build_poly(m_, shift, n)).first;
    return it->second;
  }
  /// Christoffel coefficient; n >= 1.
  const R &A(std::size_t shift, std::size_t n) {
    return memo(A_, shift, n, [&] {
      if (n == 0)
        throw DimensionMismatch("christoffel coefficient is defined for n >= 1");
      if (n == 1)
        return R(H(shift + 1, 0) * H_inv(shift, 0));
      return R(H(shift + 1, n - 1) * (H_inv(shift, n - 1) - H_inv(shift + 2, n - 2)));
    });
  }
  /// Geronimus coefficient.
  const R &B(std::size_t shift, std::size_t n) {
    return memo(B_, shift, n, [&] { return R(H(shift + 1, n) * H_inv(shift, n)); });
  }

private:
  using Key = std::pair<std::size_t, std::size_t>;

  template <class F>
  const R &memo(std::map<Key, R> &store, std::size_t shift, std::size_t n, F &&f) {
    const Key key{shift, n};
    auto it = store.find(key);
    if (it == store.end())
      it = store.emplace(key, f()).first;
    return it->second;
  }

  Moments<R> m_;
  std::map<Key, R> H_, Hi_, a_, b_, A_, B_;
  std::map<Key, MatPoly<R>> P_;
};

} // namespace ncint
