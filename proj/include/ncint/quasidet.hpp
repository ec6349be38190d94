#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ncint/errors.hpp"
#include "ncint/jet.hpp"
#include "ncint/matrix.hpp"

namespace ncint {

/// rows x cols array of ring elements (Matrix or Jet), every block p x p.
/// Indices are zero-based throughout.
template <class R>
class BlockMatrix {
public:
  BlockMatrix(std::size_t rows, std::size_t cols, std::vector<R> blocks)
      : rows_(rows), cols_(cols), blocks_(std::move(blocks)) {
    if (rows_ == 0 || cols_ == 0)
      throw DimensionMismatch("block matrix must be at least 1x1");
    if (blocks_.size() != rows_ * cols_)
      throw DimensionMismatch("block count does not match " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
    const auto p = blocks_.front().rows();
    for (const auto &b : blocks_)
      if (b.rows() != p || b.cols() != p)
        throw DimensionMismatch("blocks must all be " + std::to_string(p) + "x" +
                                std::to_string(p));
  }

  template <class F>
  static BlockMatrix generate(std::size_t rows, std::size_t cols, F &&f) {
    std::vector<R> b;
    b.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        b.push_back(f(i, j));
    return BlockMatrix(rows, cols, std::move(b));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t dim() const noexcept { return blocks_.front().rows(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  R &operator()(std::size_t i, std::size_t j) { return blocks_.at(i * cols_ + j); }
  const R &operator()(std::size_t i, std::size_t j) const { return blocks_.at(i * cols_ + j); }

  const R &proto() const { return blocks_.front(); }

  /// Flattens the blocks at the given row/column indices; either list may be
  /// empty.
  R flatten(const std::vector<std::size_t> &rows, const std::vector<std::size_t> &cols) const {
    std::vector<const R *> grid;
    grid.reserve(rows.size() * cols.size());
    for (auto i : rows)
      for (auto j : cols)
        grid.push_back(&(*this)(i, j));
    return assemble(proto(), grid, rows.size(), cols.size());
  }

  R flatten() const { return flatten(all(rows_), all(cols_)); }

  BlockMatrix select(const std::vector<std::size_t> &rows,
                     const std::vector<std::size_t> &cols) const {
    return generate(rows.size(), cols.size(),
                    [&](std::size_t i, std::size_t j) { return (*this)(rows[i], cols[j]); });
  }

  static std::vector<std::size_t> all(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = i;
    return v;
  }

  static std::vector<std::size_t> all_but(std::size_t n, std::size_t skip) {
    std::vector<std::size_t> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      if (i != skip)
        v.push_back(i);
    return v;
  }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<R> blocks_;
};

/// |A|_{i,j} = a_ij - r_i^j (A^{i,j})^{-1} c_j^i, computed as one Schur
/// complement of the flattened deleted submatrix.
template <class R>
R quasidet(const BlockMatrix<R> &a, std::size_t i, std::size_t j) {
  if (!a.is_square())
    throw DimensionMismatch("quasi-determinant of a non-square block matrix");
  if (i >= a.rows() || j >= a.cols())
    throw DimensionMismatch("quasi-determinant index out of range");
  if (a.rows() == 1)
    return a(0, 0);
  const auto rows = BlockMatrix<R>::all_but(a.rows(), i);
  const auto cols = BlockMatrix<R>::all_but(a.cols(), j);
  const R sub = a.flatten(rows, cols);
  const R row = a.flatten({i}, cols);
  const R col = a.flatten(rows, {j});
  try {
    return a(i, j) - row * solve(sub, col);
  } catch (const SingularMatrix &) {
    throw SingularSubmatrix("quasi-determinant |A|_{" + std::to_string(i) + "," +
                            std::to_string(j) + "} of a " + std::to_string(a.rows()) +
                            "x" + std::to_string(a.cols()) + " block matrix is not defined");
  }
}

/// Quasi-determinant at the bottom-right corner, the bordered form used
/// everywhere in the orthogonal polynomial formulas.
template <class R>
R quasidet_corner(const BlockMatrix<R> &a) {
  return quasidet(a, a.rows() - 1, a.cols() - 1);
}

/// Solves the block system a x = rhs by flattened exact elimination.
template <class R>
std::vector<R> qd_solve(const BlockMatrix<R> &a, const std::vector<R> &rhs) {
  if (!a.is_square() || rhs.size() != a.rows())
    throw DimensionMismatch("qd_solve: system shape mismatch");
  const auto n = a.rows();
  const auto p = a.dim();
  std::vector<const R *> col;
  for (const auto &r : rhs)
    col.push_back(&r);
  const R b = assemble(a.proto(), col, n, 1);
  const R x = solve(a.flatten(), b);
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(block_of(x, i * p, 0, p, p));
  return out;
}

/// The same solution through x_i = sum_j |A|_{j,i}^{-1} xi_j. Needs every
/// quasi-determinant defined and invertible.
template <class R>
std::vector<R> qd_solve_by_quasidets(const BlockMatrix<R> &a, const std::vector<R> &rhs) {
  if (!a.is_square() || rhs.size() != a.rows())
    throw DimensionMismatch("qd_solve_by_quasidets: system shape mismatch");
  const auto n = a.rows();
  std::vector<R> inv;
  inv.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      inv.push_back(inverse(quasidet(a, j, i)));
  std::vector<R> x;
  x.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    R acc = inv[0 * n + i] * rhs[0];
    for (std::size_t j = 1; j < n; ++j)
      acc = acc + inv[j * n + i] * rhs[j];
    x.push_back(std::move(acc));
  }
  return x;
}

namespace detail {
/// Index list {0..k-1} followed by the extra indices.
inline std::vector<std::size_t> head_plus(std::size_t k, std::initializer_list<std::size_t> extra) {
  std::vector<std::size_t> v = BlockMatrix<Matrix>::all(k);
  v.insert(v.end(), extra.begin(), extra.end());
  return v;
}
} // namespace detail

/// Residual of the non-commutative Jacobi identity for the partition
///
///     | A B C |
///     | D f g |      A is (n-2)x(n-2) blocks, box at i.
///     | E h i |
///
/// LHS - (|A C; E i| - |A B; E h| |A B; D f|^{-1} |A C; D g|).
template <class R>
R check_nc_jacobi(const BlockMatrix<R> &a) {
  if (!a.is_square() || a.rows() < 2)
    throw DimensionMismatch("Jacobi identity needs a square block matrix of size >= 2");
  const std::size_t k = a.rows() - 2, f = k, l = k + 1;
  const R lhs = quasidet_corner(a);
  const auto corner = [&](std::size_t r, std::size_t c) {
    return quasidet_corner(a.select(detail::head_plus(k, {r}), detail::head_plus(k, {c})));
  };
  const R ac_ei = corner(l, l);
  const R ab_eh = corner(l, f);
  const R ab_df = corner(f, f);
  const R ac_dg = corner(f, l);
  return lhs - (ac_ei - ab_eh * solve(ab_df, ac_dg));
}

/// Residuals of the row and column homological relations for the same
/// partition as check_nc_jacobi:
///
///   |A B C; D f g; E [h] i| = |..[i]| |A B C; D f g; 0 [0] 1|
///   |A B C; D f [g]; E h i| = |A B 0; D f [0]; E h 1| |..[i]|
template <class R>
std::pair<R, R> check_homological(const BlockMatrix<R> &a) {
  if (!a.is_square() || a.rows() < 2)
    throw DimensionMismatch("homological relations need a square block matrix of size >= 2");
  const std::size_t n = a.rows(), l = n - 1, f = n - 2, p = a.dim();
  const R corner = quasidet(a, l, l);
  const R zero = zero_like(a.proto(), p, p);
  const R one = identity_like(a.proto(), p);

  BlockMatrix<R> bottom = a;
  for (std::size_t j = 0; j < n; ++j)
    bottom(l, j) = j == l ? one : zero;
  BlockMatrix<R> right = a;
  for (std::size_t i = 0; i < n; ++i)
    right(i, l) = i == l ? one : zero;

  R row_res = quasidet(a, l, f) - corner * quasidet(bottom, l, f);
  R col_res = quasidet(a, f, l) - quasidet(right, f, l) * corner;
  return {std::move(row_res), std::move(col_res)};
}

/// Residuals (one per expansion line) of the derivative formula for the
/// bordered quasi-determinant |A B; C [d]| whose blocks are jets of order
/// >= 1. The left side is the jet derivative of the quasi-determinant; the
/// right sides are built from constant terms and first derivatives only.
inline std::pair<Matrix, Matrix> check_qd_derivative(const BlockMatrix<Jet> &a) {
  if (!a.is_square())
    throw DimensionMismatch("derivative formula needs a square block matrix");
  if (a.proto().order() < 1)
    throw OrderExceeded("derivative formula needs jets of order >= 1");
  const std::size_t n = a.rows() - 1, p = a.dim();
  const Matrix lhs = quasidet_corner(a).derivative(1);

  const auto val = BlockMatrix<Matrix>::generate(
      n + 1, n + 1, [&](std::size_t i, std::size_t j) { return a(i, j).value(); });
  const auto der = BlockMatrix<Matrix>::generate(
      n + 1, n + 1, [&](std::size_t i, std::size_t j) { return a(i, j).derivative(1); });
  const Matrix zero(p, p);
  const Matrix one = Matrix::identity(p);

  // |A B; C' d'| and |A B'; C d'|
  auto first = val;
  auto second = val;
  for (std::size_t j = 0; j <= n; ++j)
    first(n, j) = der(n, j);
  for (std::size_t i = 0; i <= n; ++i)
    second(i, n) = der(i, n);
  Matrix line1 = quasidet_corner(first);
  Matrix line2 = quasidet_corner(second);

  for (std::size_t k = 0; k < n; ++k) {
    // |A e_k^T; C 0| |A B; (A^k)' (B^k)'|
    auto ek_col = val;
    for (std::size_t i = 0; i <= n; ++i)
      ek_col(i, n) = i == k ? one : zero;
    auto row_k = val;
    for (std::size_t j = 0; j <= n; ++j)
      row_k(n, j) = der(k, j);
    line1 += quasidet_corner(ek_col) * quasidet_corner(row_k);

    // |A (A_k)'; C (C_k)'| |A B; e_k 0|
    auto col_k = val;
    for (std::size_t i = 0; i <= n; ++i)
      col_k(i, n) = der(i, k);
    auto ek_row = val;
    for (std::size_t j = 0; j <= n; ++j)
      ek_row(n, j) = j == k ? one : zero;
    line2 += quasidet_corner(col_k) * quasidet_corner(ek_row);
  }
  return {lhs - line1, lhs - line2};
}

} // namespace ncint
