#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ncint/errors.hpp"
#include "ncint/matrix.hpp"

namespace ncint {

/// Block operator truncated to rows and columns 0..last, stored by band
/// offset: bands()[k][n] is the block at (n, n + k).
template <class R>
class BandOperator {
public:
  BandOperator(std::size_t last, R zero) : last_(last), zero_(std::move(zero)) {}

  std::size_t last() const noexcept { return last_; }

  void set(std::size_t row, long offset, R value) {
    const long col = static_cast<long>(row) + offset;
    if (row > last_ || col < 0 || col > static_cast<long>(last_))
      throw DimensionMismatch("band entry (" + std::to_string(row) + ", " + std::to_string(col) +
                              ") outside the truncation");
    bands_[offset].insert_or_assign(row, std::move(value));
  }

  /// Block at (row, col); the zero block when off-band.
  const R &at(std::size_t row, std::size_t col) const {
    const long offset = static_cast<long>(col) - static_cast<long>(row);
    auto b = bands_.find(offset);
    if (b == bands_.end())
      return zero_;
    auto e = b->second.find(row);
    return e == b->second.end() ? zero_ : e->second;
  }

  std::set<long> offsets() const {
    std::set<long> out;
    for (const auto &[k, _] : bands_)
      out.insert(k);
    return out;
  }

  const std::map<long, std::map<std::size_t, R>> &bands() const noexcept { return bands_; }

  /// Product of the truncated operators. Rows whose bi-infinite product
  /// would reach past `last` are not exact; callers pick interior rows.
  friend BandOperator operator*(const BandOperator &x, const BandOperator &y) {
    BandOperator out(x.last_, x.zero_);
    for (const auto &[kx, bx] : x.bands_)
      for (const auto &[row, vx] : bx) {
        const std::size_t mid = row + kx;
        for (const auto &[ky, by] : y.bands_) {
          auto e = by.find(mid);
          if (e == by.end())
            continue;
          const long col = static_cast<long>(mid) + ky;
          if (col < 0 || col > static_cast<long>(out.last_))
            continue;
          const long off = kx + ky;
          auto &band = out.bands_[off];
          auto it = band.find(row);
          if (it == band.end())
            band.emplace(row, vx * e->second);
          else
            it->second = it->second + vx * e->second;
        }
      }
    return out;
  }

  BandOperator strictly_lower() const {
    BandOperator out(last_, zero_);
    for (const auto &[k, b] : bands_)
      if (k < 0)
        out.bands_[k] = b;
    return out;
  }

private:
  std::size_t last_;
  R zero_;
  std::map<long, std::map<std::size_t, R>> bands_;
};

/// Block Jacobi operator with b_n below, a_n on and the identity above the
/// diagonal, rows 0..last. b[0] is not used.
template <class R>
BandOperator<R> jacobi_operator(const std::vector<R> &a, const std::vector<R> &b,
                                std::size_t last) {
  const R &proto = a.at(0);
  const auto p = proto.rows();
  BandOperator<R> op(last, zero_like(proto, p, p));
  for (std::size_t n = 0; n <= last; ++n) {
    op.set(n, 0, a.at(n));
    if (n > 0)
      op.set(n, -1, b.at(n));
    if (n < last)
      op.set(n, 1, identity_like(proto, p));
  }
  return op;
}

/// k-th power by repeated multiplication.
template <class R>
BandOperator<R> power(const BandOperator<R> &op, std::size_t k) {
  if (k == 0)
    throw DimensionMismatch("power must be positive");
  BandOperator<R> out = op;
  for (std::size_t i = 1; i < k; ++i)
    out = out * op;
  return out;
}

/// Last row at which the truncated k-th power of a tridiagonal operator
/// agrees with the semi-infinite one in its strictly lower part: paths from
/// row n to a column below n climb at most (k-1)/2 rows.
inline long interior_last_row(std::size_t last, std::size_t k) {
  return static_cast<long>(last) - static_cast<long>((k - 1) / 2);
}

} // namespace ncint
