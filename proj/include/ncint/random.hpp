#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "ncint/errors.hpp"
#include "ncint/jet.hpp"
#include "ncint/matrix.hpp"
#include "ncint/moments.hpp"
#include "ncint/quasidet.hpp"

namespace ncint {

/// mt19937_64 with a plain modulo mapping, so streams are identical across
/// standard libraries (std::uniform_int_distribution is not).
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

  long uniform(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(eng_() % span);
  }

  std::uint64_t next() { return eng_(); }

private:
  std::mt19937_64 eng_;
};

inline Matrix random_matrix(SeededRng &rng, std::size_t rows, std::size_t cols, long lo = -9,
                            long hi = 9) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = rng.uniform(lo, hi);
  return m;
}

inline BlockMatrix<Matrix> random_block_matrix(SeededRng &rng, std::size_t n, std::size_t p,
                                               long lo = -9, long hi = 9) {
  return BlockMatrix<Matrix>::generate(
      n, n, [&](std::size_t, std::size_t) { return random_matrix(rng, p, p, lo, hi); });
}

inline Jet random_jet(SeededRng &rng, std::size_t p, std::size_t order, long lo = -9,
                      long hi = 9) {
  std::vector<Matrix> c;
  for (std::size_t k = 0; k <= order; ++k)
    c.push_back(random_matrix(rng, p, p, lo, hi));
  return Jet(std::move(c));
}

/// W = G G^T + I, symmetric positive definite with small integer entries.
inline Matrix random_spd_weight(SeededRng &rng, std::size_t p) {
  const Matrix g = random_matrix(rng, p, p, -3, 3);
  return g * g.transpose() + Matrix::identity(p);
}

/// Random atomic measure with `count` distinct positive half-integer nodes
/// (or `count` mirror pairs +-x when even) and positive definite weights.
/// Positive nodes make every shifted Hankel block of the requested sizes
/// positive definite, so all quasi-determinants exist.
inline MeasureSpec gen_measure(std::size_t p, std::size_t count, std::uint64_t seed,
                               bool even = false) {
  if (p == 0 || count == 0)
    throw DimensionMismatch("measure needs p >= 1 and at least one node");
  SeededRng rng(seed);
  std::vector<long> pool(3 * count);
  std::iota(pool.begin(), pool.end(), 1L);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform(static_cast<long>(i),
                                                         static_cast<long>(pool.size()) - 1));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());

  MeasureSpec spec;
  spec.p = p;
  spec.even = even;
  for (long k : pool) {
    Rational x(k, 2);
    x.canonicalize();
    const Matrix w = random_spd_weight(rng, p);
    spec.nodes.push_back(x);
    spec.weights.push_back(w);
    if (even) {
      spec.nodes.push_back(-x);
      spec.weights.push_back(w);
    }
  }
  return spec;
}

} // namespace ncint
