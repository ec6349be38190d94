#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ncint/errors.hpp"
#include "ncint/lattice.hpp"
#include "ncint/matpoly.hpp"
#include "ncint/moments.hpp"
#include "ncint/mops.hpp"
#include "ncint/residual_report.hpp"

namespace ncint {

namespace detail {
inline Moments<Jet> even_flow_jets(const MomentJetTable &t2) {
  require_flow(t2, 2, 1);
  if (!odd_moments_vanish(t2.jets))
    throw ValidationError(ValidationIssue::NotEvenMeasure,
                          "Volterra checks need a measure with vanishing odd moments");
  // t_2 on m is t_1 on d_i = m_{2i}.
  return even_part(t2.jets);
}

/// (H_n^{(0)})^{-1} dH_n^{(0)} - (H_{n-1}^{(1)})^{-1} dH_{n-1}^{(1)}
///   = (H_n^{(0)})^{-1} H_n^{(1)} - (H_{n-1}^{(0)})^{-1} H_{n-1}^{(1)}
/// with the n-1 terms absent at n = 0.
inline Rational volterra_bilinear_1(const VolterraData<Jet> &v, std::size_t n) {
  const Matrix h0i = inverse(v.H0[n].value());
  Matrix r = h0i * v.H0[n].derivative(1) - h0i * v.H1[n].value();
  if (n > 0) {
    r -= inverse(v.H1[n - 1].value()) * v.H1[n - 1].derivative(1);
    r += inverse(v.H0[n - 1].value()) * v.H1[n - 1].value();
  }
  return r.max_abs();
}

/// (H_n^{(1)})^{-1} dH_n^{(1)} - (H_n^{(0)})^{-1} dH_n^{(0)}
///   = (H_n^{(1)})^{-1} H_{n+1}^{(0)} - (H_{n-1}^{(1)})^{-1} H_n^{(0)}
inline Rational volterra_bilinear_2(const VolterraData<Jet> &v, std::size_t n) {
  const Matrix h1i = inverse(v.H1[n].value());
  Matrix r = h1i * v.H1[n].derivative(1) - inverse(v.H0[n].value()) * v.H0[n].derivative(1) -
             h1i * v.H0[n + 1].value();
  if (n > 0)
    r += inverse(v.H1[n - 1].value()) * v.H0[n].value();
  return r.max_abs();
}
} // namespace detail

/// The reduced lattice along t_2 of an even measure:
///   gamma:  d gamma_n = gamma_{n+1} gamma_n - gamma_n gamma_{n-1},  n = 1..2N
///   xi:     d xi_n = zeta_{n+1} xi_n - xi_n zeta_n,               n = 1..N
///   zeta:   d zeta_{n+1} = xi_{n+1} zeta_{n+1} - zeta_{n+1} xi_n,  n = 0..N
///   bil_1, bil_2: the bilinear pair (see volterra_bilinear_*),        n = 0..N
///   Q:      d Q_{2n} = alpha_n Q_{2n-2},  d Q_{2n+1} = beta_n Q_{2n-1}
inline ResidualReport volterra_residual(const MomentJetTable &t2, std::size_t N) {
  const Moments<Jet> d = detail::even_flow_jets(t2);
  ResidualReport rep("volterra");
  rep.param("N", N);

  VolterraData<Jet> v;
  try {
    v = build_volterra(d, N + 1);
  } catch (const SingularMatrix &e) {
    rep.record_undefined(0, "volterra", e.what());
    return rep;
  }
  const auto p = d.dim();
  const auto val = [](const Jet &j) -> const Matrix & { return j.value(); };

  for (std::size_t n = 1; n <= 2 * N; ++n)
    rep.record(static_cast<long>(n), "gamma",
               (v.gamma[n].derivative(1) -
                (val(v.gamma[n + 1]) * val(v.gamma[n]) - val(v.gamma[n]) * val(v.gamma[n - 1])))
                   .max_abs());
  for (std::size_t n = 1; n <= N; ++n)
    rep.record(static_cast<long>(n), "xi",
               (v.xi[n].derivative(1) -
                (val(v.zeta[n + 1]) * val(v.xi[n]) - val(v.xi[n]) * val(v.zeta[n])))
                   .max_abs());
  for (std::size_t n = 0; n <= N; ++n)
    rep.record(static_cast<long>(n), "zeta",
               (v.zeta[n + 1].derivative(1) -
                (val(v.xi[n + 1]) * val(v.zeta[n + 1]) - val(v.zeta[n + 1]) * val(v.xi[n])))
                   .max_abs());

  for (std::size_t n = 0; n <= N; ++n) {
    rep.evaluate(static_cast<long>(n), "bil_1", [&] { return detail::volterra_bilinear_1(v, n); });
    rep.evaluate(static_cast<long>(n), "bil_2", [&] { return detail::volterra_bilinear_2(v, n); });
  }

  // Q_{2n}(x) = P_n^{(0)}(x^2), Q_{2n+1}(x) = x P_n^{(1)}(x^2), built on d.
  FamilyCache<Jet> c(d);
  const Matrix zero(p, p);
  for (std::size_t n = 0; n <= N; ++n) {
    const long s = static_cast<long>(n);
    rep.evaluate(s, "Q_even", [&] {
      auto r = time_derivative(c.P(0, n).compose_square());
      if (n > 0)
        r = r - val(v.alpha[n]) * value_of(c.P(0, n - 1).compose_square());
      return r.max_abs();
    });
    rep.evaluate(s, "Q_odd", [&] {
      auto r = time_derivative(c.P(1, n).compose_square().times_x());
      if (n > 0)
        r = r - val(v.beta[n]) * value_of(c.P(1, n - 1).compose_square().times_x());
      return r.max_abs();
    });
  }
  return rep;
}

/// The two adjacent Hankel families of the even part each solve the bilinear
/// Toda equation along t_2, and the Volterra bilinear pair links them.
inline ResidualReport backlund_residual(const MomentJetTable &t2, std::size_t N) {
  const Moments<Jet> d = detail::even_flow_jets(t2);
  if (t2.order < 2)
    throw OrderExceeded("Backlund linkage needs jets of order >= 2");
  ResidualReport rep("backlund");
  rep.param("N", N);
  rep.absorb(toda_bilinear_residual(d, N, 0), "toda_H0:");
  rep.absorb(toda_bilinear_residual(d, N, 1), "toda_H1:");
  VolterraData<Jet> v;
  try {
    v = build_volterra(d, N + 1);
  } catch (const SingularMatrix &e) {
    rep.record_undefined(0, "link", e.what());
    return rep;
  }
  for (std::size_t n = 0; n <= N; ++n) {
    rep.evaluate(static_cast<long>(n), "link_1", [&] { return detail::volterra_bilinear_1(v, n); });
    rep.evaluate(static_cast<long>(n), "link_2", [&] { return detail::volterra_bilinear_2(v, n); });
  }
  return rep;
}

} // namespace ncint
