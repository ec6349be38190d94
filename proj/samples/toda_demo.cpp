// Builds the block orthogonal polynomials of a small 2x2 measure, prints the
// recurrence coefficients and checks a few lattice identities exactly.

#include <iostream>
#include <string>

#include "ncint/ncint.hpp"

using namespace ncint;

namespace {

void print(const std::string &label, const Matrix &m) {
  std::cout << label << " = [";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::cout << (i ? "; " : "");
    for (std::size_t j = 0; j < m.cols(); ++j)
      std::cout << (j ? " " : "") << to_string(m(i, j));
  }
  std::cout << "]\n";
}

void summary(const ResidualReport &r) {
  std::cout << (r.pass() ? "  ok   " : "  FAIL ") << r.suite() << " (" << r.sites().size()
            << " sites, max residual " << to_string(r.max_residual()) << ")\n";
}

} // namespace

int main() {
  // Four nodes, hand-picked symmetric positive definite weights.
  MeasureSpec mu;
  mu.p = 2;
  mu.nodes = {Rational(1, 2), Rational(1), Rational(2), Rational(3)};
  mu.weights = {Matrix{{2, 1}, {1, 1}}, Matrix{{1, 0}, {0, 3}}, Matrix{{2, -1}, {-1, 2}},
                Matrix{{1, 1}, {1, 2}}};
  const std::size_t N = 2;
  ensure_valid(mu, N);

  const MomentTable m = moment_table(mu, 4 * N + 16);
  FamilyCache<Matrix> c(m);
  for (std::size_t n = 0; n <= N; ++n) {
    std::cout << "n = " << n << "\n";
    print("  H", c.H(0, n));
    print("  a", c.a(0, n));
    print("  b", c.b(0, n));
  }
  const auto &p2 = c.P(0, 2);
  std::cout << "P_2 coefficients:\n";
  for (std::size_t i = 0; i <= p2.degree(); ++i)
    print("  x^" + std::to_string(i), p2.coeff(i));

  std::cout << "identities:\n";
  summary(orthogonality_residual(m, N, {0, 1, 2}));
  summary(toda_nonlinear_residual(build_jet_table(m, 1, 2, 2 * N + 8), N));
  summary(toda_bilinear_residual(build_jet_table(m, 1, 2, 2 * N + 8), N));
  summary(discrete_toda_residual(m, N));
  summary(christoffel_residual(m, N));

  // A random even measure: odd moments vanish, so a_n = 0.
  MeasureSpec even = gen_measure(2, N + 2, 11, true);
  const auto t2 = build_jet_table(even, 2, 2, 4 * N + 12);
  summary(volterra_residual(t2, N));
  summary(backlund_residual(t2, N));

  const auto kdv = kdv_limit_slope(default_kdv_field(false), 0.3L, halving_steps(0.1L, 4));
  std::cout << "KdV defect slope " << static_cast<double>(kdv.slope) << "\n";
}
