// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "ncint/ncint.hpp"
#include "ncint/cli/runner.hpp"
#include "oracles.hpp"

using namespace ncint;

namespace {

// Pinned thresholds.
constexpr std::size_t kQuasidetInstances = 100;   // per (n, p)
constexpr std::size_t kSolverInstances = 50;      // total
constexpr double kQuasidetSeconds = 60.0;
constexpr double kTodaSeconds = 120.0;
constexpr double kSlopeNonCommuting = 3.7;
constexpr double kSlopeScalar = 4.7;
constexpr std::uint64_t kSeed = 20240611;
constexpr int kMaxRedraws = 64;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char *what, const std::function<Outcome()> &body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass)
    ++failures;
  std::printf("[%s] criterion %d: %s (%s; %.2fs)\n", o.pass ? "PASS" : "FAIL", id, what,
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

/// Accumulates exact-zero checks.
struct Tally {
  std::size_t checks = 0, nonzero = 0, undefined = 0;
  std::string first;

  void zero(bool ok, const std::string &what) {
    ++checks;
    if (!ok && nonzero++ == 0)
      first = what;
  }
  void suite(const ResidualReport &r, const std::string &ctx) {
    checks += r.sites().size();
    undefined += r.undefined_count();
    if (!r.pass() && nonzero++ == 0) {
      const auto *f = r.first_failure();
      first = ctx + " " + r.suite() +
              (f ? " n=" + std::to_string(f->n) + " " + f->equation : std::string(" no defined site"));
    }
  }
  Outcome outcome() const {
    std::ostringstream os;
    os << checks << " exact checks, " << nonzero << " nonzero, " << undefined << " undefined";
    if (nonzero)
      os << "; first: " << first;
    return {nonzero == 0 && undefined == 0 && checks > 0, os.str()};
  }
};

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
  report(1, "quasi-determinant Jacobi + homological identities, scalar determinant ratio", [] {
    const auto t0 = std::chrono::steady_clock::now();
    SeededRng rng(kSeed);
    Tally t;
    std::size_t redraws = 0, skipped = 0;
    for (std::size_t n = 2; n <= 5; ++n)
      for (std::size_t p = 1; p <= 3; ++p)
        for (std::size_t k = 0; k < kQuasidetInstances; ++k) {
          for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxRedraws) {
              ++skipped;
              break;
            }
            const auto a = random_block_matrix(rng, n, p);
            try {
              const std::string tag = "n=" + std::to_string(n) + " p=" + std::to_string(p);
              const Matrix jac = check_nc_jacobi(a);
              const auto [row, col] = check_homological(a);
              t.zero(jac.is_zero(), "jacobi " + tag);
              t.zero(row.is_zero(), "homological row " + tag);
              t.zero(col.is_zero(), "homological col " + tag);
              if (p == 1) {
                const Matrix flat = a.flatten();
                t.zero(quasidet(a, n - 1, n - 1)(0, 0) ==
                           oracle::scalar_quasidet(flat, n - 1, n - 1),
                       "determinant ratio " + tag);
              }
              break;
            } catch (const SingularMatrix &) {
              ++redraws;
            }
          }
        }
    auto o = t.outcome();
    const double secs = elapsed_since(t0);
    o.detail += ", " + std::to_string(redraws) + " singular redraws";
    if (skipped) {
      o.pass = false;
      o.detail += ", " + std::to_string(skipped) + " instances skipped";
    }
    if (secs >= kQuasidetSeconds) {
      o.pass = false;
      o.detail += ", over the time budget";
    }
    return o;
  });

  report(2, "qd_solve equals the quasi-determinant solution formula", [] {
    SeededRng rng(kSeed + 1);
    Tally t;
    std::size_t solved = 0;
    while (solved < kSolverInstances) {
      const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform(0, 3));
      const std::size_t p = 1 + static_cast<std::size_t>(rng.uniform(0, 2));
      const auto a = random_block_matrix(rng, n, p);
      std::vector<Matrix> rhs;
      for (std::size_t i = 0; i < n; ++i)
        rhs.push_back(random_matrix(rng, p, p));
      try {
        t.zero(qd_solve(a, rhs) == qd_solve_by_quasidets(a, rhs),
               "n=" + std::to_string(n) + " p=" + std::to_string(p));
        ++solved;
      } catch (const SingularMatrix &) {
      }
    }
    return t.outcome();
  });

  report(3, "orthogonality, three-term recurrence, quasi-determinant coefficients, Gram-Schmidt",
         [] {
           Tally t;
           const std::size_t N = 4;
           for (std::size_t p = 1; p <= 3; ++p)
             for (std::uint64_t s = 0; s < 2; ++s) {
               const auto m = moment_table(gen_measure(p, N + 2, kSeed + 10 * p + s), 4 * N + 16);
               const std::string ctx = "p=" + std::to_string(p);
               t.suite(orthogonality_residual(m, N, {0, 1, 2}), ctx);
               t.suite(recurrence_residual(m, N, {0, 1, 2}), ctx);
               for (std::size_t l = 0; l <= 2; ++l) {
                 const auto gs = oracle::gram_schmidt(m, l, N);
                 for (std::size_t n = 0; n <= N; ++n)
                   t.zero((build_poly(m, l, n) - gs[n]).is_zero(), "gram-schmidt " + ctx);
               }
             }
           return t.outcome();
         });

  report(4, "semi-discrete Toda: nonlinear, bilinear, wave k=1,2,3, t2 flow, Hankel derivative",
         [] {
           const auto t0 = std::chrono::steady_clock::now();
           Tally t;
           const std::size_t N = 3;
           for (std::size_t p = 1; p <= 3; ++p) {
             const auto m = moment_table(gen_measure(p, N + 2, kSeed + 100 + p), 60);
             const auto t1 = build_jet_table(m, 1, 2, 2 * N + 10);
             const std::string ctx = "p=" + std::to_string(p);
             t.suite(toda_nonlinear_residual(t1, N), ctx);
             t.suite(toda_bilinear_residual(t1, N), ctx);
             t.suite(hankel_derivative_residual(t1, N), ctx);
             for (std::size_t k = 1; k <= 3; ++k)
               t.suite(wave_evolution_residual(build_jet_table(m, k, 2, 2 * N + 10), N), ctx);
             t.suite(t2_nonlinear_residual(build_jet_table(m, 2, 2, 2 * N + 10), N), ctx);
           }
           auto o = t.outcome();
           if (elapsed_since(t0) >= kTodaSeconds) {
             o.pass = false;
             o.detail += ", over the time budget";
           }
           return o;
         });

  report(5, "discrete Toda, Christoffel, Geronimus, (n1), ML = LM, A/B system", [] {
    Tally t;
    const std::size_t N = 3;
    for (std::size_t p = 1; p <= 2; ++p) {
      const auto m = moment_table(gen_measure(p, N + 2, kSeed + 200 + p), 60);
      const std::string ctx = "p=" + std::to_string(p);
      for (std::size_t l = 0; l <= 1; ++l) {
        t.suite(discrete_toda_residual(m, N, l), ctx);
        t.suite(christoffel_residual(m, N, l), ctx);
        t.suite(geronimus_residual(m, N, l), ctx);
      }
      t.suite(discrete_compatibility_residual(m, N, 1), ctx);
    }
    return t.outcome();
  });

  report(6, "Volterra lattice sub-suites and Backlund linkage on even measures", [] {
    Tally t;
    const std::size_t N = 2;
    for (std::size_t p = 1; p <= 3; ++p) {
      const auto m = moment_table(gen_measure(p, N + 2, kSeed + 300 + p, true), 60);
      const auto t2 = build_jet_table(m, 2, 2, 4 * N + 12);
      const std::string ctx = "p=" + std::to_string(p);
      const auto v = volterra_residual(t2, N);
      t.suite(v, ctx);
      for (const char *eq : {"gamma", "xi", "zeta", "bil_1", "bil_2", "Q_even", "Q_odd"}) {
        bool seen = false;
        for (const auto &s : v.sites())
          seen = seen || s.equation == eq;
        t.zero(seen, std::string("missing sub-suite ") + eq);
      }
      const auto d = even_part(t2.jets);
      t.suite(toda_bilinear_residual(d, N, 0), ctx + " H0");
      t.suite(toda_bilinear_residual(d, N, 1), ctx + " H1");
      t.suite(backlund_residual(t2, N), ctx);
    }
    return t.outcome();
  });

  report(7, "KdV continuum limit defect slopes", [] {
    const std::vector<long double> eps = {0.1L, 0.05L, 0.025L, 0.0125L};
    const auto nc = kdv_limit_slope(default_kdv_field(false), 0.3L, eps);
    const auto sc = kdv_limit_slope(default_kdv_field(true), 0.3L, eps);
    const double s4 = static_cast<double>(nc.slope), s5 = static_cast<double>(sc.slope);
    char buf[160];
    std::snprintf(buf, sizeof buf, "non-commuting 2x2 slope %.3f >= %.1f, scalar slope %.3f >= %.1f",
                  s4, kSlopeNonCommuting, s5, kSlopeScalar);
    return Outcome{s4 >= kSlopeNonCommuting && s5 >= kSlopeScalar, buf};
  });

  report(8, "identical configs give byte-identical reports apart from metadata", [] {
    const auto dir = std::filesystem::temp_directory_path() / "ncint_acceptance_determinism";
    std::filesystem::remove_all(dir);
    cli::RunConfig cfg;
    cfg.p = 2;
    cfg.N = 3;
    cfg.seed = 7;
    cfg.instances = 3;
    cfg.out_dir = dir.string();
    std::ostringstream log;
    const auto a = cli::run_verify(cfg, log);
    const auto b = cli::run_verify(cfg, log);
    const std::string ja = cli::strip_metadata(cli::read_json_file(a.path)).dump();
    const std::string jb = cli::strip_metadata(cli::read_json_file(b.path)).dump();
    const bool same = ja == jb && a.path != b.path;
    std::filesystem::remove_all(dir);
    return Outcome{same && a.exit_code == 0,
                   std::to_string(ja.size()) + " bytes compared, exit " +
                       std::to_string(a.exit_code)};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
