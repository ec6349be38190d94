#pragma once

// Independent reference computations. None of these call the quasi-determinant
// engine or the polynomial builders.

#include <cstddef>
#include <utility>
#include <vector>

#include "ncint/jet.hpp"
#include "ncint/matpoly.hpp"
#include "ncint/matrix.hpp"
#include "ncint/moments.hpp"

namespace oracle {

using ncint::Jet;
using ncint::Matrix;
using ncint::Rational;

/// Fraction-free Bareiss elimination, with row swaps.
inline Rational det(Matrix a) {
  const std::size_t n = a.rows();
  if (n == 0)
    return 1;
  Rational sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t r = k + 1;
      while (r < n && sgn(a(r, k)) == 0)
        ++r;
      if (r == n)
        return 0;
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a(k, j), a(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

/// a with row i and column j removed.
inline Matrix minor(const Matrix &a, std::size_t i, std::size_t j) {
  Matrix m(a.rows() - 1, a.cols() - 1);
  for (std::size_t r = 0, rr = 0; r < a.rows(); ++r) {
    if (r == i)
      continue;
    for (std::size_t c = 0, cc = 0; c < a.cols(); ++c) {
      if (c == j)
        continue;
      m(rr, cc++) = a(r, c);
    }
    ++rr;
  }
  return m;
}

/// Scalar quasi-determinant |A|_{ij} = (-1)^{i+j} det A / det A^{ij}.
inline Rational scalar_quasidet(const Matrix &a, std::size_t i, std::size_t j) {
  Rational r = det(a) / det(minor(a, i, j));
  return (i + j) % 2 ? Rational(-r) : r;
}

/// Scalar Hankel determinant det(m_{shift+i+j})_{i,j<n}; 1 for n = 0.
inline Rational hankel_det(const ncint::MomentTable &m, std::size_t shift, std::size_t n) {
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h(i, j) = m[shift + i + j](0, 0);
  return det(h);
}

/// Determinant of a square array of scalar (1x1) jets by cofactor expansion.
inline Jet jet_det(const std::vector<std::vector<Jet>> &a) {
  const std::size_t n = a.size();
  if (n == 1)
    return a[0][0];
  Jet acc = Jet::zero(1, 1, a[0][0].order());
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Jet>> sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Jet> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j)
          row.push_back(a[r][c]);
      sub.push_back(std::move(row));
    }
    const Jet term = a[0][j] * jet_det(sub);
    acc = j % 2 ? acc - term : acc + term;
  }
  return acc;
}

/// tau_n = det(J_{shift+i+j})_{i,j<n} over scalar moment jets; tau_0 = 1.
inline Jet hankel_tau(const ncint::Moments<Jet> &m, std::size_t shift, std::size_t n) {
  if (n == 0)
    return Jet::identity(1, m[0].order());
  std::vector<std::vector<Jet>> a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a[i].push_back(m[shift + i + j]);
  return jet_det(a);
}

/// <f, g> = sum_ij f_i m_{shift+i+j} g_j^T, written out independently.
inline Matrix inner(const ncint::MatPoly<Matrix> &f, const ncint::MatPoly<Matrix> &g,
                    const ncint::MomentTable &m, std::size_t shift) {
  Matrix acc(m.dim(), m.dim());
  for (std::size_t i = 0; i < f.coeffs().size(); ++i)
    for (std::size_t j = 0; j < g.coeffs().size(); ++j)
      acc += f.coeffs()[i] * m[shift + i + j] * g.coeffs()[j].transpose();
  return acc;
}

/// Monic block Gram-Schmidt on 1, x, x^2, ...:
///   P_n = x^n - sum_{k<n} <x^n, P_k> <P_k, P_k>^{-1} P_k
inline std::vector<ncint::MatPoly<Matrix>> gram_schmidt(const ncint::MomentTable &m,
                                                        std::size_t shift, std::size_t n_max) {
  const std::size_t p = m.dim();
  std::vector<ncint::MatPoly<Matrix>> P;
  std::vector<Matrix> norms;
  for (std::size_t n = 0; n <= n_max; ++n) {
    std::vector<Matrix> c(n + 1, Matrix(p, p));
    c[n] = Matrix::identity(p);
    const ncint::MatPoly<Matrix> mono(c);
    ncint::MatPoly<Matrix> q = mono;
    for (std::size_t k = 0; k < n; ++k)
      q = q - (inner(mono, P[k], m, shift) * ncint::inverse(norms[k])) * P[k];
    norms.push_back(inner(q, q, m, shift));
    P.push_back(q);
  }
  return P;
}

} // namespace oracle
