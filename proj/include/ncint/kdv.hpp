#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ncint/errors.hpp"

namespace ncint {

using KdvMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

/// r(x) = sum_k coeffs[k] x^k, evaluated with its derivatives exactly.
struct MatrixPolynomialField {
  std::vector<KdvMatrix> coeffs;

  long dim() const { return coeffs.empty() ? 0 : coeffs.front().rows(); }

  KdvMatrix derivative(long double x, std::size_t order) const {
    KdvMatrix acc = KdvMatrix::Zero(dim(), dim());
    for (std::size_t k = coeffs.size(); k-- > order;) {
      long double falling = 1;
      for (std::size_t i = 0; i < order; ++i)
        falling *= static_cast<long double>(k - i);
      acc = acc * x + falling * coeffs[k];
    }
    return acc;
  }
  KdvMatrix operator()(long double x) const { return derivative(x, 0); }
};

struct KdvSample {
  long double eps;
  long double norm;
};

struct KdvResult {
  std::vector<KdvSample> samples;
  /// Least-squares slope of log norm against log eps; NaN when every
  /// norm vanishes.
  long double slope = std::numeric_limits<long double>::quiet_NaN();
  bool all_zero = false;
};

/// Max-entry norm of
///   D(eps) = eps^-2 (g(x+eps) g(x) - g(x) g(x-eps))
///            - [2 eps r_x + eps^3 (r_x r + r r_x) + (eps^3 / 3) r_xxx],
/// g = I + eps^2 r. The bracket is the part of the lattice right-hand side
/// captured by the continuum equation, so D = O(eps^4) in general and
/// O(eps^5) when r commutes with r_xx.
inline long double kdv_defect(const MatrixPolynomialField &r, long double x, long double eps) {
  const long p = r.dim();
  const KdvMatrix I = KdvMatrix::Identity(p, p);
  const long double e2 = eps * eps;
  const KdvMatrix g0 = I + e2 * r(x);
  const KdvMatrix gp = I + e2 * r(x + eps);
  const KdvMatrix gm = I + e2 * r(x - eps);
  const KdvMatrix lattice = (gp * g0 - g0 * gm) / e2;
  const KdvMatrix rv = r(x), rx = r.derivative(x, 1), rxxx = r.derivative(x, 3);
  const long double e3 = e2 * eps;
  const KdvMatrix cont = 2 * eps * rx + e3 * (rx * rv + rv * rx) + (e3 / 3) * rxxx;
  return (lattice - cont).cwiseAbs().maxCoeff();
}

inline KdvResult kdv_limit_slope(const MatrixPolynomialField &r, long double x,
                                 const std::vector<long double> &eps) {
  if (eps.size() < 2)
    throw DimensionMismatch("slope fit needs at least two step sizes");
  if (r.coeffs.empty())
    throw DimensionMismatch("empty field");
  KdvResult out;
  bool any = false;
  for (long double e : eps) {
    if (!(e > 0))
      throw DimensionMismatch("step sizes must be positive");
    const long double n = kdv_defect(r, x, e);
    out.samples.push_back({e, n});
    any = any || n != 0;
  }
  if (!any) {
    out.all_zero = true;
    return out;
  }
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (const auto &s : out.samples) {
    if (s.norm == 0)
      continue;
    const long double lx = std::log(s.eps), ly = std::log(s.norm);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k >= 2) {
    const long double kk = static_cast<long double>(k);
    out.slope = (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
  }
  return out;
}

/// eps_0 / 2^i, i = 0..count-1.
inline std::vector<long double> halving_steps(long double eps0, std::size_t count) {
  std::vector<long double> e;
  for (std::size_t i = 0; i < count; ++i)
    e.push_back(eps0 / std::ldexp(1.0L, static_cast<int>(i)));
  return e;
}

/// A 2x2 cubic field with [r_xx, r] != 0 (slope 4) or a scalar quintic
/// (slope 5).
inline MatrixPolynomialField default_kdv_field(bool scalar) {
  MatrixPolynomialField f;
  if (scalar) {
    for (long double c : {0.5L, -1.0L, 0.75L, 1.0L, -0.5L, 0.25L}) {
      KdvMatrix m(1, 1);
      m(0, 0) = c;
      f.coeffs.push_back(m);
    }
    return f;
  }
  KdvMatrix a(2, 2), b(2, 2), c(2, 2), d(2, 2);
  a << 1, 2, 0, -1;
  b << 0, 1, 1, 0;
  c << 2, 0, 1, -1;
  d << 0, -1, 1, 1;
  f.coeffs = {a, b, c, d};
  return f;
}

} // namespace ncint
