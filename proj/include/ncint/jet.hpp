#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncint/errors.hpp"
#include "ncint/matrix.hpp"

namespace ncint {

/// Truncated Taylor expansion f(t0 + e) = sum_k c_k e^k, k = 0..K, with
/// matrix coefficients.
///
/// Binary operations between jets of different order truncate to the smaller
/// order, which is what Taylor calculus gives. Coefficients may be
/// rectangular so flattened block matrices of jets are jets themselves.
class Jet {
public:
  Jet() = default;

  explicit Jet(std::vector<Matrix> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty())
      throw DimensionMismatch("jet needs at least one coefficient");
    for (const auto &m : c_)
      if (m.rows() != c_.front().rows() || m.cols() != c_.front().cols())
        throw DimensionMismatch("jet coefficients of unequal shape");
  }

  static Jet constant(const Matrix &m, std::size_t order) {
    std::vector<Matrix> c(order + 1, Matrix(m.rows(), m.cols()));
    c[0] = m;
    return Jet(std::move(c));
  }

  static Jet zero(std::size_t rows, std::size_t cols, std::size_t order) {
    return Jet(std::vector<Matrix>(order + 1, Matrix(rows, cols)));
  }

  static Jet identity(std::size_t n, std::size_t order) {
    return constant(Matrix::identity(n), order);
  }

  std::size_t order() const noexcept { return c_.size() - 1; }
  std::size_t rows() const noexcept { return c_.front().rows(); }
  std::size_t cols() const noexcept { return c_.front().cols(); }

  const Matrix &coeff(std::size_t k) const {
    if (k > order())
      throw OrderExceeded("coefficient " + std::to_string(k) + " of an order-" +
                          std::to_string(order()) + " jet");
    return c_[k];
  }
  const Matrix &value() const { return c_.front(); }
  std::span<const Matrix> coeffs() const noexcept { return c_; }

  /// k-th time derivative at t0, i.e. k! c_k.
  Matrix derivative(std::size_t k) const {
    Matrix d = coeff(k);
    Rational fact = 1;
    for (std::size_t i = 2; i <= k; ++i)
      fact *= static_cast<unsigned long>(i);
    return d *= fact;
  }

  /// Jet of d/dt f; one order lower.
  Jet differentiate() const {
    if (order() == 0)
      throw OrderExceeded("cannot differentiate an order-0 jet");
    std::vector<Matrix> d;
    d.reserve(order());
    for (std::size_t k = 1; k <= order(); ++k)
      d.push_back(c_[k] * Rational(static_cast<unsigned long>(k)));
    return Jet(std::move(d));
  }

  Jet truncate(std::size_t order) const {
    if (order > this->order())
      throw OrderExceeded("cannot extend a jet by truncation");
    return Jet(std::vector<Matrix>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(order) + 1));
  }

  Jet transpose() const {
    std::vector<Matrix> t;
    t.reserve(c_.size());
    for (const auto &m : c_)
      t.push_back(m.transpose());
    return Jet(std::move(t));
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Matrix &m) { return m.is_zero(); });
  }

  Rational max_abs() const {
    Rational best = 0;
    for (const auto &m : c_) {
      Rational v = m.max_abs();
      if (v > best)
        best = v;
    }
    return best;
  }

  friend Jet operator+(const Jet &a, const Jet &b) {
    const std::size_t k = std::min(a.order(), b.order());
    std::vector<Matrix> c;
    c.reserve(k + 1);
    for (std::size_t i = 0; i <= k; ++i)
      c.push_back(a.c_[i] + b.c_[i]);
    return Jet(std::move(c));
  }

  friend Jet operator-(const Jet &a, const Jet &b) {
    const std::size_t k = std::min(a.order(), b.order());
    std::vector<Matrix> c;
    c.reserve(k + 1);
    for (std::size_t i = 0; i <= k; ++i)
      c.push_back(a.c_[i] - b.c_[i]);
    return Jet(std::move(c));
  }

  friend Jet operator-(Jet a) {
    for (auto &m : a.c_)
      m = -m;
    return a;
  }

  friend Jet operator*(const Jet &a, const Jet &b) {
    const std::size_t k = std::min(a.order(), b.order());
    std::vector<Matrix> c;
    c.reserve(k + 1);
    for (std::size_t n = 0; n <= k; ++n) {
      Matrix acc = a.c_[0] * b.c_[n];
      for (std::size_t i = 1; i <= n; ++i)
        acc += a.c_[i] * b.c_[n - i];
      c.push_back(std::move(acc));
    }
    return Jet(std::move(c));
  }

  friend Jet operator*(const Rational &s, Jet a) {
    for (auto &m : a.c_)
      m *= s;
    return a;
  }

  friend bool operator==(const Jet &a, const Jet &b) { return a.c_ == b.c_; }

private:
  std::vector<Matrix> c_;
};

/// X with A X = B, order min(order A, order B). Uses one factorization of
/// A's constant term for every order.
inline Jet solve(const Jet &a, const Jet &b) {
  const ExactLU lu(a.value());
  const std::size_t k = std::min(a.order(), b.order());
  std::vector<Matrix> x;
  x.reserve(k + 1);
  for (std::size_t n = 0; n <= k; ++n) {
    Matrix rhs = b.coeff(n);
    for (std::size_t i = 1; i <= n; ++i)
      rhs -= a.coeff(i) * x[n - i];
    x.push_back(lu.solve(rhs));
  }
  return Jet(std::move(x));
}

inline Jet inverse(const Jet &j) {
  if (j.rows() != j.cols())
    throw DimensionMismatch("inverse of a non-square jet");
  return solve(j, Jet::identity(j.rows(), j.order()));
}

inline Jet transpose(const Jet &j) { return j.transpose(); }
inline bool is_zero(const Jet &j) { return j.is_zero(); }
inline Rational max_abs(const Jet &j) { return j.max_abs(); }
inline const Matrix &value_of(const Jet &j) { return j.value(); }

inline Jet zero_like(const Jet &proto, std::size_t rows, std::size_t cols) {
  return Jet::zero(rows, cols, proto.order());
}
inline Jet identity_like(const Jet &proto, std::size_t n) { return Jet::identity(n, proto.order()); }

inline Jet block_of(const Jet &j, std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) {
  std::vector<Matrix> c;
  c.reserve(j.order() + 1);
  for (const auto &m : j.coeffs())
    c.push_back(m.block(r0, c0, nr, nc));
  return Jet(std::move(c));
}

inline Jet assemble(const Jet &proto, std::span<const Jet *const> grid, std::size_t nr,
                    std::size_t nc) {
  const std::size_t p = proto.rows();
  std::size_t order = proto.order();
  for (const Jet *b : grid)
    order = std::min(order, b->order());
  std::vector<Matrix> c(order + 1, Matrix(nr * p, nc * p));
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      for (std::size_t k = 0; k <= order; ++k)
        c[k].set_block(i * p, j * p, grid[i * nc + j]->coeff(k));
  return Jet(std::move(c));
}

} // namespace ncint
