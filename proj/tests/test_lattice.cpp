#include <gtest/gtest.h>

#include "ncint/band_operator.hpp"
#include "ncint/discrete.hpp"
#include "ncint/lattice.hpp"
#include "ncint/random.hpp"
#include "ncint/volterra.hpp"
#include "oracles.hpp"

using namespace ncint;

namespace {
void expect_clean(const ResidualReport &r) {
  EXPECT_TRUE(r.pass()) << r.suite();
  EXPECT_EQ(r.undefined_count(), 0u) << r.suite();
  if (const auto *f = r.first_failure())
    ADD_FAILURE() << r.suite() << " n=" << f->n << " " << f->equation << " "
                  << to_string(f->residual);
}

const SiteResidual *find_site(const ResidualReport &r, long n, const std::string &eq) {
  for (const auto &s : r.sites())
    if (s.n == n && s.equation == eq)
      return &s;
  return nullptr;
}
} // namespace

TEST(BandOperator, JacobiSquareBands) {
  const std::vector<Matrix> a = {Matrix{{1}}, Matrix{{2}}, Matrix{{3}}, Matrix{{4}}};
  const std::vector<Matrix> b = {Matrix{{0}}, Matrix{{5}}, Matrix{{6}}, Matrix{{7}}};
  const auto L = jacobi_operator(a, b, 3);
  const auto L2 = power(L, 2);
  EXPECT_EQ(L2.at(2, 1), a[2] * b[2] + b[2] * a[1]);
  EXPECT_EQ(L2.at(3, 1), b[3] * b[2]);
  EXPECT_EQ(L2.at(1, 1), b[1] + a[1] * a[1] + b[2]);
  EXPECT_EQ(L2.strictly_lower().offsets(), (std::set<long>{-2, -1}));
  EXPECT_TRUE(L.at(0, 3).is_zero());
  EXPECT_THROW(BandOperator<Matrix>(2, Matrix(1, 1)).set(2, 1, Matrix{{1}}), DimensionMismatch);
}

TEST(BandOperator, InteriorRowsAreTruncationIndependent) {
  SeededRng rng(301);
  std::vector<Matrix> a, b;
  for (int n = 0; n < 9; ++n) {
    a.push_back(random_matrix(rng, 2, 2));
    b.push_back(random_matrix(rng, 2, 2));
  }
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto small = power(jacobi_operator(a, b, 5), k).strictly_lower();
    const auto big = power(jacobi_operator(a, b, 8), k).strictly_lower();
    for (long n = 0; n <= interior_last_row(5, k); ++n)
      for (long m = 0; m < n; ++m)
        EXPECT_EQ(small.at(n, m), big.at(n, m)) << k << " " << n << " " << m;
  }
}

TEST(Toda, AllContinuousSuitesExactOnRandomMeasures) {
  for (std::size_t p = 1; p <= 3; ++p)
    for (std::uint64_t seed : {1u, 2u}) {
      const auto spec = gen_measure(p, 5, 100 * p + seed);
      const auto m = moment_table(spec, 40);
      const auto t1 = build_jet_table(m, 1, 2, 16);
      expect_clean(toda_nonlinear_residual(t1, 3));
      expect_clean(toda_bilinear_residual(t1, 3));
      expect_clean(hankel_derivative_residual(t1, 3));
      for (std::size_t k = 1; k <= 3; ++k)
        expect_clean(wave_evolution_residual(build_jet_table(m, k, 1, 16), 3));
      expect_clean(t2_nonlinear_residual(build_jet_table(m, 2, 1, 16), 3));
    }
}

TEST(Toda, ShiftedFamiliesAlsoSolveIt) {
  const auto m = moment_table(gen_measure(2, 6, 7), 40);
  const auto t1 = build_jet_table(m, 1, 2, 16);
  for (std::size_t l = 1; l <= 2; ++l) {
    expect_clean(toda_nonlinear_residual(t1, 3, l));
    expect_clean(toda_bilinear_residual(t1, 3, l));
  }
}

// p = 1: tau_n = det Lambda_{n-1}, H_n = tau_{n+1}/tau_n and
// tau_n'' tau_n - tau_n'^2 = tau_{n+1} tau_{n-1}.
TEST(Toda, ScalarTauOracle) {
  const auto m = moment_table(gen_measure(1, 6, 17), 30);
  const auto t1 = build_jet_table(m, 1, 2, 12);
  for (std::size_t n = 0; n <= 4; ++n) {
    const Jet tau = oracle::hankel_tau(t1.jets, 0, n);
    const Jet next = oracle::hankel_tau(t1.jets, 0, n + 1);
    EXPECT_EQ(hankel_H(t1.jets, 0, n), next * inverse(tau));
    if (n >= 1) {
      const Jet prev = oracle::hankel_tau(t1.jets, 0, n - 1);
      EXPECT_EQ(tau.derivative(2) * tau.value() - tau.derivative(1) * tau.derivative(1),
                next.value() * prev.value());
    }
  }
  expect_clean(toda_bilinear_residual(t1, 4));
}

TEST(Toda, SmallestInstance) {
  const auto t1 = build_jet_table(gen_measure(2, 3, 5), 1, 2, 10);
  const auto r = toda_bilinear_residual(t1, 1);
  expect_clean(r);
  EXPECT_EQ(r.sites().size(), 2u);
}

TEST(Toda, NeedsOrderTwoForBilinear) {
  const auto t1 = build_jet_table(gen_measure(2, 4, 5), 1, 1, 10);
  EXPECT_THROW(toda_bilinear_residual(t1, 2), OrderExceeded);
  EXPECT_THROW(toda_nonlinear_residual(build_jet_table(gen_measure(2, 4, 5), 2, 1, 10), 2),
               DimensionMismatch);
}

TEST(Toda, BoundarySitesAreChecked) {
  const auto t1 = build_jet_table(gen_measure(2, 5, 8), 1, 2, 14);
  const auto r = toda_nonlinear_residual(t1, 3);
  ASSERT_NE(find_site(r, 0, "da"), nullptr);
  EXPECT_TRUE(find_site(r, 0, "da")->exact_zero());
  const auto w = wave_evolution_residual(t1, 3);
  ASSERT_NE(find_site(w, 0, "dP"), nullptr);
  EXPECT_TRUE(find_site(w, 0, "dP")->exact_zero());
}

TEST(Toda, WaveResidualsIndependentOfTruncation) {
  const auto m = moment_table(gen_measure(2, 7, 9), 60);
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto t = build_jet_table(m, k, 1, 20);
    const auto small = wave_evolution_residual(t, 3);
    const auto big = wave_evolution_residual(t, 5);
    for (const auto &s : small.sites()) {
      const auto *o = find_site(big, s.n, s.equation);
      ASSERT_NE(o, nullptr) << s.equation << " " << s.n;
      EXPECT_EQ(o->residual, s.residual);
    }
  }
}

TEST(Toda, WaveT2InteriorAtNFour) {
  const auto t2 = build_jet_table(moment_table(gen_measure(2, 6, 12), 60), 2, 1, 20);
  const auto r = wave_evolution_residual(t2, 4);
  expect_clean(r);
  for (long n = 0; n <= 2; ++n)
    EXPECT_NE(find_site(r, n, "dP"), nullptr);
}

TEST(Toda, EvenMeasureReductions) {
  const auto m = moment_table(gen_measure(2, 5, 13, true), 60);
  const auto t1 = build_jet_table(m, 1, 2, 20);
  const auto t2 = build_jet_table(m, 2, 1, 20);
  FamilyCache<Jet> c1(t1.jets), c2(t2.jets);
  for (std::size_t n = 0; n <= 3; ++n) {
    EXPECT_TRUE(c1.a(0, n).value().is_zero());
    // t_2 keeps the measure even, so a_n stays zero along it.
    EXPECT_TRUE(c2.a(0, n).derivative(1).is_zero());
  }
  expect_clean(toda_nonlinear_residual(t1, 3));
  expect_clean(t2_nonlinear_residual(t2, 3));
  // With a_n = 0 the t_2 flow is d b_n = b_{n+1} b_n - b_n b_{n-1}.
  for (std::size_t n = 1; n <= 3; ++n)
    EXPECT_EQ(c2.b(0, n).derivative(1),
              c2.b(0, n + 1).value() * c2.b(0, n).value() -
                  c2.b(0, n).value() * c2.b(0, n - 1).value());
}

TEST(Toda, EvenMeasureT3LeavesEvenPartFixed) {
  const auto m = moment_table(gen_measure(2, 5, 14, true), 60);
  const auto t3 = build_jet_table(m, 3, 1, 20);
  expect_clean(wave_evolution_residual(t3, 3));
  // d_i = m_{2i} moves by m_{2i+3} = 0, so Q_n and gamma_n are constant.
  const auto d = even_part(t3.jets);
  FamilyCache<Jet> c(d);
  for (std::size_t n = 0; n <= 3; ++n) {
    EXPECT_TRUE(time_derivative(c.P(0, n).compose_square()).is_zero());
    EXPECT_TRUE(time_derivative(c.P(1, n).compose_square().times_x()).is_zero());
  }
  const auto v = build_volterra(d, 3);
  for (const auto &g : v.gamma)
    EXPECT_TRUE(g.derivative(1).is_zero());
}

TEST(Discrete, AllSuitesExact) {
  for (std::size_t p = 1; p <= 2; ++p)
    for (std::uint64_t seed : {3u, 4u}) {
      const auto m = moment_table(gen_measure(p, 5, 10 * p + seed), 40);
      for (std::size_t l = 0; l <= 2; ++l) {
        expect_clean(discrete_toda_residual(m, 3, l));
        expect_clean(christoffel_residual(m, 3, l));
        expect_clean(christoffel_residual(m, 3, l, IdentityMode::Points));
        expect_clean(geronimus_residual(m, 3, l));
        expect_clean(geronimus_residual(m, 3, l, IdentityMode::Points));
      }
      expect_clean(discrete_compatibility_residual(m, 3, 1));
      expect_clean(discrete_compatibility_residual(m, 3, 2));
    }
}

TEST(Discrete, P3) {
  const auto m = moment_table(gen_measure(3, 5, 77), 40);
  expect_clean(discrete_toda_residual(m, 3));
  expect_clean(discrete_compatibility_residual(m, 3));
}

// p = 1: tau^{(l)}_{n+2} tau^{(l+2)}_n = tau^{(l)}_{n+1} tau^{(l+2)}_{n+1} - (tau^{(l+1)}_{n+1})^2
TEST(Discrete, ScalarDeterminantOracle) {
  const auto m = moment_table(gen_measure(1, 6, 19), 30);
  const auto tau = [&](std::size_t l, std::size_t n) { return oracle::hankel_det(m, l, n); };
  for (std::size_t l = 0; l <= 1; ++l)
    for (std::size_t n = 0; n <= 3; ++n)
      EXPECT_EQ(tau(l, n + 2) * tau(l + 2, n),
                tau(l, n + 1) * tau(l + 2, n + 1) - tau(l + 1, n + 1) * tau(l + 1, n + 1));
  expect_clean(discrete_toda_residual(m, 4));
}

TEST(Discrete, PointModeCatchesAWrongIdentity) {
  MatPoly<Matrix> r({Matrix{{0}}, Matrix{{1}}, Matrix{{-1}}}); // x - x^2
  EXPECT_NE(polynomial_residual(r, IdentityMode::Points), 0);
  EXPECT_NE(polynomial_residual(r, IdentityMode::Coefficients), 0);
}

TEST(Discrete, EvenMeasureLeavesOddShiftSitesUndefined) {
  const auto m = moment_table(gen_measure(2, 5, 20, true), 40);
  const auto r = discrete_toda_residual(m, 3, 0);
  // n = 0 only involves H_0^{(1)} = m_1 = 0, which is never inverted.
  ASSERT_NE(find_site(r, 0, "ncdt"), nullptr);
  EXPECT_TRUE(find_site(r, 0, "ncdt")->exact_zero());
  EXPECT_GT(r.undefined_count(), 0u);
  EXPECT_TRUE(r.pass());
}

TEST(Discrete, CompatibilityNeedsShiftOne) {
  const auto m = moment_table(gen_measure(2, 5, 21), 40);
  EXPECT_THROW(discrete_compatibility_residual(m, 3, 0), DimensionMismatch);
  const auto r = discrete_compatibility_residual(m, 1, 1);
  expect_clean(r);
  EXPECT_NE(find_site(r, 1, "n1"), nullptr);
}

TEST(Volterra, AllSubSuitesExact) {
  for (std::size_t p = 1; p <= 3; ++p) {
    const auto m = moment_table(gen_measure(p, 5, 500 + p, true), 60);
    const auto t2 = build_jet_table(m, 2, 2, 30);
    for (std::size_t N = 1; N <= 3; ++N) {
      expect_clean(volterra_residual(t2, N));
      expect_clean(backlund_residual(t2, N));
    }
  }
}

TEST(Volterra, SixPairScalarMeasure) {
  const auto m = moment_table(gen_measure(1, 6, 601, true), 60);
  const auto r = volterra_residual(build_jet_table(m, 2, 1, 30), 2);
  expect_clean(r);
  for (const char *eq : {"gamma", "xi", "zeta", "bil_1", "bil_2", "Q_even", "Q_odd"}) {
    bool seen = false;
    for (const auto &s : r.sites())
      seen = seen || s.equation == eq;
    EXPECT_TRUE(seen) << eq;
  }
  // gamma sites 1..4 at N = 2
  EXPECT_NE(find_site(r, 4, "gamma"), nullptr);
  EXPECT_EQ(find_site(r, 5, "gamma"), nullptr);
}

TEST(Volterra, BoundaryGammaOne) {
  const auto m = moment_table(gen_measure(2, 4, 602, true), 60);
  const auto t2 = build_jet_table(m, 2, 1, 30);
  const auto v = build_volterra(even_part(t2.jets), 2);
  EXPECT_EQ(v.gamma[1].derivative(1), v.gamma[2].value() * v.gamma[1].value());
}

TEST(Volterra, RejectsNonEvenMeasure) {
  const auto t2 = build_jet_table(gen_measure(2, 5, 603), 2, 2, 30);
  EXPECT_THROW(volterra_residual(t2, 2), ValidationError);
  EXPECT_THROW(backlund_residual(t2, 2), ValidationError);
}

TEST(Volterra, MatchesTodaWithZeroDiagonal) {
  // Q_k is P_k of the full even measure, so its recurrence is Toda's with
  // a_k = 0 and b_k = gamma_k.
  const auto m = moment_table(gen_measure(2, 5, 604, true), 60);
  const auto v = build_volterra(even_part(m), 3);
  FamilyCache<Matrix> c(m);
  for (std::size_t k = 1; k <= 7; ++k)
    EXPECT_EQ(c.b(0, k), v.gamma[k]) << k;
}
