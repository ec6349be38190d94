#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "ncint/errors.hpp"
#include "ncint/jet.hpp"
#include "ncint/matrix.hpp"

namespace ncint {

/// Polynomial sum_i c_i x^i with ring-element coefficients. Coefficients
/// multiply monomials from the left; the scalar x commutes with everything.
template <class R>
class MatPoly {
public:
  MatPoly() = default;
  explicit MatPoly(std::vector<R> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty())
      throw DimensionMismatch("polynomial needs at least one coefficient");
  }

  /// x^n times the identity.
  static MatPoly monomial(const R &proto, std::size_t n) {
    const auto p = proto.rows();
    std::vector<R> c(n + 1, zero_like(proto, p, p));
    c[n] = identity_like(proto, p);
    return MatPoly(std::move(c));
  }

  static MatPoly zero(const R &proto) {
    return MatPoly(std::vector<R>{zero_like(proto, proto.rows(), proto.rows())});
  }

  /// Storage length minus one; may exceed the true degree if the top
  /// coefficients vanish.
  std::size_t degree() const noexcept { return c_.size() - 1; }
  const R &coeff(std::size_t i) const { return c_.at(i); }
  const std::vector<R> &coeffs() const noexcept { return c_; }

  /// Value at a scalar point (Horner).
  R evaluate(const Rational &x) const {
    R acc = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;)
      acc = x * acc + c_[i];
    return acc;
  }

  MatPoly times_x() const {
    std::vector<R> c;
    c.reserve(c_.size() + 1);
    c.push_back(zero_like(c_.front(), c_.front().rows(), c_.front().cols()));
    c.insert(c.end(), c_.begin(), c_.end());
    return MatPoly(std::move(c));
  }

  /// p(x^2)
  MatPoly compose_square() const {
    const R zero = zero_like(c_.front(), c_.front().rows(), c_.front().cols());
    std::vector<R> c(2 * c_.size() - 1, zero);
    for (std::size_t i = 0; i < c_.size(); ++i)
      c[2 * i] = c_[i];
    return MatPoly(std::move(c));
  }

  bool is_monic() const {
    const auto &top = c_.back();
    return ncint::is_zero(top - identity_like(top, top.rows()));
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const R &r) { return ncint::is_zero(r); });
  }

  Rational max_abs() const {
    Rational best = 0;
    for (const auto &r : c_) {
      Rational v = ncint::max_abs(r);
      if (v > best)
        best = v;
    }
    return best;
  }

  friend MatPoly operator+(const MatPoly &a, const MatPoly &b) { return combine(a, b, false); }
  friend MatPoly operator-(const MatPoly &a, const MatPoly &b) { return combine(a, b, true); }

  friend MatPoly operator*(const R &left, const MatPoly &p) {
    std::vector<R> c;
    c.reserve(p.c_.size());
    for (const auto &r : p.c_)
      c.push_back(left * r);
    return MatPoly(std::move(c));
  }

private:
  static MatPoly combine(const MatPoly &a, const MatPoly &b, bool subtract) {
    const std::size_t n = std::max(a.c_.size(), b.c_.size());
    const R &proto = a.c_.front();
    const R zero = zero_like(proto, proto.rows(), proto.cols());
    std::vector<R> c;
    c.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const R &x = i < a.c_.size() ? a.c_[i] : zero;
      const R &y = i < b.c_.size() ? b.c_[i] : zero;
      c.push_back(subtract ? x - y : x + y);
    }
    return MatPoly(std::move(c));
  }

  std::vector<R> c_;
};

/// Coefficient-wise k-th time derivative of a polynomial with jet coefficients.
inline MatPoly<Matrix> time_derivative(const MatPoly<Jet> &p, std::size_t k = 1) {
  std::vector<Matrix> c;
  c.reserve(p.coeffs().size());
  for (const auto &j : p.coeffs())
    c.push_back(j.derivative(k));
  return MatPoly<Matrix>(std::move(c));
}

inline MatPoly<Matrix> value_of(const MatPoly<Jet> &p) {
  std::vector<Matrix> c;
  c.reserve(p.coeffs().size());
  for (const auto &j : p.coeffs())
    c.push_back(j.value());
  return MatPoly<Matrix>(std::move(c));
}

inline const MatPoly<Matrix> &value_of(const MatPoly<Matrix> &p) { return p; }

} // namespace ncint
