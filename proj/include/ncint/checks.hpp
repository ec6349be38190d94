#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ncint/discrete.hpp"
#include "ncint/errors.hpp"
#include "ncint/matpoly.hpp"
#include "ncint/moments.hpp"
#include "ncint/mops.hpp"
#include "ncint/quasidet.hpp"
#include "ncint/random.hpp"
#include "ncint/residual_report.hpp"

namespace ncint {

namespace detail {
inline std::string shape_label(const char *what, std::size_t n, std::size_t p) {
  return std::string(what) + " n=" + std::to_string(n) + " p=" + std::to_string(p);
}

/// Draws until every quasi-determinant the identities touch is defined.
/// Singular draws are measure-zero but do happen with small integer entries.
template <class Check>
bool draw_and_check(SeededRng &rng, std::size_t n, std::size_t p, Check &&check) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto a = random_block_matrix(rng, n, p);
    try {
      check(a);
      return true;
    } catch (const SingularMatrix &) {
    }
  }
  return false;
}
} // namespace detail

/// Jacobi identity, both homological relations, and |A|_{ij} =
/// ((A^{-1})_{ji})^{-1} on random integer block matrices, `instances` per
/// (n, p). Site n is the instance index within its (n, p) group.
inline ResidualReport quasidet_identity_residual(std::uint64_t seed, std::size_t instances,
                                                 std::size_t n_min = 2, std::size_t n_max = 5,
                                                 std::size_t p_max = 3) {
  ResidualReport rep("quasidet");
  rep.param("seed", std::to_string(seed)).param("instances", instances);
  SeededRng rng(seed);
  for (std::size_t n = n_min; n <= n_max; ++n)
    for (std::size_t p = 1; p <= p_max; ++p)
      for (std::size_t k = 0; k < instances; ++k) {
        Rational jac, row, col, inv;
        const bool ok = detail::draw_and_check(rng, n, p, [&](const BlockMatrix<Matrix> &a) {
          jac = check_nc_jacobi(a).max_abs();
          const auto [r, c] = check_homological(a);
          row = r.max_abs();
          col = c.max_abs();
          const Matrix full_inv = inverse(a.flatten());
          Rational worst = 0;
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
              const Matrix blk = full_inv.block(j * p, i * p, p, p);
              Rational v = (quasidet(a, i, j) - inverse(blk)).max_abs();
              if (v > worst)
                worst = v;
            }
          inv = worst;
        });
        const long site = static_cast<long>(k);
        if (!ok) {
          rep.record_undefined(site, detail::shape_label("draw", n, p), "no nonsingular draw");
          continue;
        }
        rep.record(site, detail::shape_label("jacobi", n, p), jac);
        rep.record(site, detail::shape_label("homological_row", n, p), row);
        rep.record(site, detail::shape_label("homological_col", n, p), col);
        rep.record(site, detail::shape_label("inverse_block", n, p), inv);
      }
  return rep;
}

/// qd_solve against x_i = sum_j |A|_{j,i}^{-1} xi_j on random systems.
inline ResidualReport solver_equivalence_residual(std::uint64_t seed, std::size_t instances,
                                                  std::size_t n_max = 4, std::size_t p_max = 3) {
  ResidualReport rep("solver");
  rep.param("seed", std::to_string(seed)).param("instances", instances);
  SeededRng rng(seed ^ 0x5eedULL);
  for (std::size_t n = 1; n <= n_max; ++n)
    for (std::size_t p = 1; p <= p_max; ++p)
      for (std::size_t k = 0; k < instances; ++k) {
        Rational r;
        const bool ok = detail::draw_and_check(rng, n, p, [&](const BlockMatrix<Matrix> &a) {
          std::vector<Matrix> rhs;
          for (std::size_t i = 0; i < n; ++i)
            rhs.push_back(random_matrix(rng, p, p));
          const auto x1 = qd_solve(a, rhs);
          const auto x2 = qd_solve_by_quasidets(a, rhs);
          Rational worst = 0;
          for (std::size_t i = 0; i < n; ++i) {
            Rational v = (x1[i] - x2[i]).max_abs();
            if (v > worst)
              worst = v;
          }
          r = worst;
        });
        if (ok)
          rep.record(static_cast<long>(k), detail::shape_label("solve", n, p), r);
        else
          rep.record_undefined(static_cast<long>(k), detail::shape_label("solve", n, p),
                               "no nonsingular draw");
      }
  return rep;
}

/// <P_n, P_m>_l - H_n delta_nm over m <= N, for each shift.
inline ResidualReport orthogonality_residual(const MomentTable &m, std::size_t N,
                                             const std::vector<std::size_t> &shifts) {
  ResidualReport rep("orthogonality");
  rep.param("N", N);
  FamilyCache<Matrix> c(m);
  for (auto l : shifts)
    for (std::size_t n = 0; n <= N; ++n)
      rep.evaluate(static_cast<long>(n), "l=" + std::to_string(l), [&] {
        Rational worst = 0;
        for (std::size_t k = 0; k <= N; ++k) {
          Matrix r = inner_product(c.P(l, n), c.P(l, k), m, l);
          if (k == n)
            r -= c.H(l, n);
          Rational v = r.max_abs();
          if (v > worst)
            worst = v;
        }
        return worst;
      });
  return rep;
}

/// Three-term recurrence with quasi-determinant a_n, b_n (n <= N-1), the
/// quasi-determinant coefficient formula against the linear solve, and the
/// bordered evaluation of P_n against the stored polynomial.
inline ResidualReport recurrence_residual(const MomentTable &m, std::size_t N,
                                          const std::vector<std::size_t> &shifts) {
  ResidualReport rep("recurrence");
  rep.param("N", N);
  FamilyCache<Matrix> c(m);
  const std::vector<Rational> points = {Rational(0), Rational(1), Rational(-2), Rational(1, 3)};
  for (auto l : shifts) {
    const std::string tag = " l=" + std::to_string(l);
    for (std::size_t n = 0; n + 1 <= N; ++n)
      rep.evaluate(static_cast<long>(n), "three_term" + tag, [&] {
        auto r = c.P(l, n).times_x() - (c.P(l, n + 1) + c.a(l, n) * c.P(l, n));
        if (n > 0)
          r = r - c.b(l, n) * c.P(l, n - 1);
        return r.max_abs();
      });
    for (std::size_t n = 1; n <= N; ++n) {
      rep.evaluate(static_cast<long>(n), "coeff_quasidet" + tag, [&] {
        Rational worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
          Rational v = (poly_coeff_quasidet(m, l, n, i) - c.P(l, n).coeff(i)).max_abs();
          if (v > worst)
            worst = v;
        }
        return worst;
      });
      rep.evaluate(static_cast<long>(n), "poly_quasidet" + tag, [&] {
        Rational worst = 0;
        for (const auto &x : points) {
          Rational v = (poly_quasidet_at(m, l, n, x) - c.P(l, n).evaluate(x)).max_abs();
          if (v > worst)
            worst = v;
        }
        return worst;
      });
    }
  }
  return rep;
}

/// Even measures: Q-family parity and reduced recurrences
///   x Q_{2n} = Q_{2n+1} + xi_n Q_{2n-1},  x Q_{2n+1} = Q_{2n+2} + zeta_{n+1} Q_{2n},
/// alpha_n = -xi_n zeta_n, beta_n = -zeta_{n+1} xi_n, the displayed
/// quasi-determinant forms (which give Q^T), and <Q_{2n}, Q_{2k+1}> = 0.
inline ResidualReport symmetric_family_residual(const MomentTable &m, std::size_t N) {
  ResidualReport rep("symmetric");
  rep.param("N", N);
  SymmetricFamily<Matrix> f;
  try {
    f = build_symmetric_family(m, N);
  } catch (const SingularMatrix &e) {
    rep.record_undefined(0, "build", e.what());
    return rep;
  }
  const auto &v = f.data;
  const auto &Q = f.Q;
  const MomentTable d = even_part(m);
  const std::vector<Rational> points = {Rational(0), Rational(1), Rational(-1, 2), Rational(3)};
  for (std::size_t n = 0; n < N; ++n) {
    const long s = static_cast<long>(n);
    rep.evaluate(s, "reduced_even", [&] {
      auto r = Q[2 * n].times_x() - Q[2 * n + 1];
      if (n > 0)
        r = r - v.xi[n] * Q[2 * n - 1];
      return r.max_abs();
    });
    rep.evaluate(s, "reduced_odd", [&] {
      return (Q[2 * n + 1].times_x() - (Q[2 * n + 2] + v.zeta[n + 1] * Q[2 * n])).max_abs();
    });
  }
  for (std::size_t n = 1; n <= N; ++n) {
    const long s = static_cast<long>(n);
    rep.record(s, "alpha", (v.alpha[n] + v.xi[n] * v.zeta[n]).max_abs());
    rep.record(s, "beta", (v.beta[n] + v.zeta[n + 1] * v.xi[n]).max_abs());
  }
  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t parity = 0; parity < 2; ++parity)
      rep.evaluate(static_cast<long>(n), parity ? "q_quasidet_odd" : "q_quasidet_even", [&] {
        Rational worst = 0;
        for (const auto &x : points) {
          Rational r =
              (q_quasidet_at(d, parity, n, x) - Q[2 * n + parity].evaluate(x).transpose()).max_abs();
          if (r > worst)
            worst = r;
        }
        return worst;
      });
  for (std::size_t n = 0; n <= N; ++n)
    rep.evaluate(static_cast<long>(n), "parity_orthogonal", [&] {
      Rational worst = 0;
      for (std::size_t k = 0; k <= N; ++k) {
        Rational r = inner_product(Q[2 * n], Q[2 * k + 1], m, 0).max_abs();
        if (r > worst)
          worst = r;
      }
      return worst;
    });
  return rep;
}

} // namespace ncint
