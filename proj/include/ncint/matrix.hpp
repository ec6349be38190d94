#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncint/errors.hpp"
#include "ncint/rational.hpp"

namespace ncint {

/// Dense row-major matrix of exact rationals.
///
/// Square instances play the role of the p x p ring elements; rectangular
/// instances show up when block matrices are flattened for elimination.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
      if (r.size() != cols_)
        throw DimensionMismatch("ragged initializer list");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Rational &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Rational> data() const noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    for (const auto &x : data_)
      if (sgn(x) != 0)
        return false;
    return true;
  }

  bool is_symmetric() const { return is_square() && *this == transpose(); }

  /// Max over entries of |entry|; zero for an empty matrix.
  Rational max_abs() const {
    Rational best = 0;
    for (const auto &x : data_)
      if (cmp(abs(x), best) > 0)
        best = abs(x);
    return best;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_)
      throw DimensionMismatch("block out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j)
        b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix &b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
      throw DimensionMismatch("set_block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j)
        (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix &operator+=(const Matrix &o) {
    require_same_shape(o, "+");
    for (std::size_t k = 0; k < data_.size(); ++k)
      data_[k] += o.data_[k];
    return *this;
  }

  Matrix &operator-=(const Matrix &o) {
    require_same_shape(o, "-");
    for (std::size_t k = 0; k < data_.size(); ++k)
      data_[k] -= o.data_[k];
    return *this;
  }

  Matrix &operator*=(const Rational &s) {
    for (auto &x : data_)
      x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
  friend Matrix operator-(Matrix a) {
    for (auto &x : a.data_)
      x = -x;
    return a;
  }
  friend Matrix operator*(Matrix a, const Rational &s) { return a *= s; }
  friend Matrix operator*(const Rational &s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols_ != b.rows_)
      throw DimensionMismatch("product of " + a.shape() + " and " + b.shape());
    Matrix c(a.rows_, b.cols_);
    mpq_class tmp;
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational &aik = a(i, k);
        if (sgn(aik) == 0)
          continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Rational &bkj = b(k, j);
          if (sgn(bkj) == 0)
            continue;
          mpq_mul(tmp.get_mpq_t(), aik.get_mpq_t(), bkj.get_mpq_t());
          mpq_add(c(i, j).get_mpq_t(), c(i, j).get_mpq_t(), tmp.get_mpq_t());
        }
      }
    return c;
  }

  friend bool operator==(const Matrix &a, const Matrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
  void require_same_shape(const Matrix &o, const char *op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionMismatch(std::string("operator") + op + " on " + shape() + " and " + o.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// PA = LU over the rationals. The pivot in each column is the first nonzero
/// entry at or below the diagonal, so the factorization is deterministic.
class ExactLU {
public:
  explicit ExactLU(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
    if (!lu_.is_square())
      throw DimensionMismatch("LU of non-square " + lu_.shape());
    const std::size_t n = lu_.rows();
    for (std::size_t i = 0; i < n; ++i)
      perm_[i] = i;
    mpq_class factor, tmp;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      while (piv < n && sgn(lu_(piv, k)) == 0)
        ++piv;
      if (piv == n)
        throw SingularMatrix("singular " + lu_.shape() + " matrix (rank deficient at column " +
                             std::to_string(k) + ")");
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j)
          std::swap(lu_(k, j), lu_(piv, j));
        std::swap(perm_[k], perm_[piv]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        if (sgn(lu_(i, k)) == 0)
          continue;
        mpq_div(factor.get_mpq_t(), lu_(i, k).get_mpq_t(), lu_(k, k).get_mpq_t());
        lu_(i, k) = factor;
        for (std::size_t j = k + 1; j < n; ++j) {
          if (sgn(lu_(k, j)) == 0)
            continue;
          mpq_mul(tmp.get_mpq_t(), factor.get_mpq_t(), lu_(k, j).get_mpq_t());
          mpq_sub(lu_(i, j).get_mpq_t(), lu_(i, j).get_mpq_t(), tmp.get_mpq_t());
        }
      }
    }
  }

  std::size_t size() const noexcept { return lu_.rows(); }

  /// Returns X with A X = B.
  Matrix solve(const Matrix &b) const {
    const std::size_t n = lu_.rows();
    if (b.rows() != n)
      throw DimensionMismatch("solve: rhs has " + std::to_string(b.rows()) + " rows, expected " +
                              std::to_string(n));
    Matrix x(n, b.cols());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        x(i, j) = b(perm_[i], j);
    mpq_class tmp;
    for (std::size_t j = 0; j < b.cols(); ++j) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) {
          if (sgn(lu_(i, k)) == 0 || sgn(x(k, j)) == 0)
            continue;
          mpq_mul(tmp.get_mpq_t(), lu_(i, k).get_mpq_t(), x(k, j).get_mpq_t());
          mpq_sub(x(i, j).get_mpq_t(), x(i, j).get_mpq_t(), tmp.get_mpq_t());
        }
      for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) {
          if (sgn(lu_(i, k)) == 0 || sgn(x(k, j)) == 0)
            continue;
          mpq_mul(tmp.get_mpq_t(), lu_(i, k).get_mpq_t(), x(k, j).get_mpq_t());
          mpq_sub(x(i, j).get_mpq_t(), x(i, j).get_mpq_t(), tmp.get_mpq_t());
        }
        mpq_div(x(i, j).get_mpq_t(), x(i, j).get_mpq_t(), lu_(i, i).get_mpq_t());
      }
    }
    return x;
  }

private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

inline Matrix solve(const Matrix &a, const Matrix &b) { return ExactLU(a).solve(b); }

inline Matrix inverse(const Matrix &m) {
  if (!m.is_square())
    throw DimensionMismatch("inverse of non-square " + m.shape());
  return ExactLU(m).solve(Matrix::identity(m.rows()));
}

inline Matrix transpose(const Matrix &m) { return m.transpose(); }
inline bool is_zero(const Matrix &m) { return m.is_zero(); }
inline Rational max_abs(const Matrix &m) { return m.max_abs(); }
inline const Matrix &value_of(const Matrix &m) { return m; }

inline Matrix zero_like(const Matrix &, std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols);
}
inline Matrix identity_like(const Matrix &, std::size_t n) { return Matrix::identity(n); }

inline Matrix block_of(const Matrix &m, std::size_t r0, std::size_t c0, std::size_t nr,
                       std::size_t nc) {
  return m.block(r0, c0, nr, nc);
}

/// Glues a row-major nr x nc grid of p x p blocks into one (nr p) x (nc p)
/// matrix. Empty grids are allowed and give 0-row or 0-column results.
inline Matrix assemble(const Matrix &proto, std::span<const Matrix *const> grid, std::size_t nr,
                       std::size_t nc) {
  const std::size_t p = proto.rows();
  Matrix out(nr * p, nc * p);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      out.set_block(i * p, j * p, *grid[i * nc + j]);
  return out;
}

} // namespace ncint
