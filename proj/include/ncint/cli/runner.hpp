#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ncint/checks.hpp"
#include "ncint/cli/config.hpp"
#include "ncint/cli/json_io.hpp"
#include "ncint/discrete.hpp"
#include "ncint/errors.hpp"
#include "ncint/kdv.hpp"
#include "ncint/lattice.hpp"
#include "ncint/moments.hpp"
#include "ncint/random.hpp"
#include "ncint/volterra.hpp"

namespace ncint::cli {

enum ExitCode : int { Pass = 0, ValidationFailed = 1, SuiteFailed = 2, ConfigFailed = 3 };

struct SuiteInfo {
  const char *name;
  bool even_only;    // needs vanishing odd moments
  bool odd_shift;    // needs odd-shift Hankels, singular for even measures
  std::size_t order; // minimum jet order, 0 for static suites
};

inline const std::vector<SuiteInfo> &suite_catalog() {
  static const std::vector<SuiteInfo> c = {
      {"quasidet", false, false, 0},       {"solver", false, false, 0},
      {"orthogonality", false, false, 0},  {"recurrence", false, false, 0},
      {"symmetric", true, false, 0},       {"toda_nonlinear", false, false, 1},
      {"toda_bilinear", false, false, 2},  {"hankel_derivative", false, false, 1},
      {"wave_t1", false, false, 1},        {"wave_t2", false, false, 1},
      {"wave_t3", false, false, 1},        {"t2_nonlinear", false, false, 1},
      {"discrete_toda", false, true, 0},   {"christoffel", false, true, 0},
      {"geronimus", false, true, 0},       {"discrete_compat", false, true, 0},
      {"volterra", true, false, 1},        {"backlund", true, false, 2},
  };
  return c;
}

inline const SuiteInfo &suite_info(const std::string &name) {
  for (const auto &s : suite_catalog())
    if (name == s.name)
      return s;
  throw ConfigError("unknown suite \"" + name + "\"");
}

inline MeasureSpec resolve_measure(const RunConfig &cfg) {
  if (cfg.measure)
    return *cfg.measure;
  return gen_measure(cfg.p, cfg.resolved_node_count(), cfg.seed, cfg.even);
}

/// "all" expands to every suite that applies to the measure's parity; an
/// explicitly named suite that cannot apply is a validation error.
inline std::vector<std::string> resolve_suites(const RunConfig &cfg, bool even) {
  std::vector<std::string> out;
  const bool all = std::find(cfg.suites.begin(), cfg.suites.end(), "all") != cfg.suites.end();
  if (all) {
    for (const auto &s : suite_catalog())
      if (even ? !s.odd_shift : !s.even_only)
        out.emplace_back(s.name);
  } else {
    for (const auto &name : cfg.suites) {
      const auto &s = suite_info(name);
      if (s.even_only && !even)
        throw ValidationError(ValidationIssue::NotEvenMeasure,
                              "suite " + name + " needs an even measure");
      if (std::find(out.begin(), out.end(), name) == out.end())
        out.push_back(name);
    }
  }
  for (const auto &name : out)
    if (suite_info(name).order > cfg.jet_order)
      throw ConfigError("suite " + name + " needs jet order >= " +
                        std::to_string(suite_info(name).order) + ", got " +
                        std::to_string(cfg.jet_order));
  return out;
}

/// Moment and jet tables for one run, built on first use.
class SuiteContext {
public:
  SuiteContext(const RunConfig &cfg, MeasureSpec spec) : cfg_(cfg), spec_(std::move(spec)) {
    const std::size_t N = cfg_.N, K = cfg_.jet_order;
    jet_depth_ = 2 * N + 10;
    volterra_depth_ = 4 * N + 12;
    moments_ = moment_table(spec_, std::max({4 * N + 16, jet_depth_ + 3 * K,
                                             volterra_depth_ + 2 * K}));
  }

  const RunConfig &config() const noexcept { return cfg_; }
  const MeasureSpec &spec() const noexcept { return spec_; }
  const MomentTable &moments() const noexcept { return moments_; }

  const MomentJetTable &jets(std::size_t k) {
    auto it = jets_.find(k);
    if (it == jets_.end())
      it = jets_.emplace(k, build_jet_table(moments_, k, cfg_.jet_order, jet_depth_)).first;
    return it->second;
  }

  const MomentJetTable &volterra_jets() {
    if (!volterra_)
      volterra_ = build_jet_table(moments_, 2, cfg_.jet_order, volterra_depth_);
    return *volterra_;
  }

  std::vector<std::size_t> shifts() const {
    return spec_.even ? std::vector<std::size_t>{0, 2} : std::vector<std::size_t>{0, 1, 2};
  }

private:
  RunConfig cfg_;
  MeasureSpec spec_;
  MomentTable moments_;
  std::size_t jet_depth_ = 0, volterra_depth_ = 0;
  std::map<std::size_t, MomentJetTable> jets_;
  std::optional<MomentJetTable> volterra_;
};

namespace detail {
template <class F>
ResidualReport over_shifts(const std::string &name, std::initializer_list<std::size_t> shifts,
                           F &&f) {
  ResidualReport rep(name);
  for (auto l : shifts) {
    auto r = f(l);
    if (rep.params().empty())
      for (const auto &[k, v] : r.params())
        if (k != "shift")
          rep.param(k, v);
    rep.absorb(r, "l=" + std::to_string(l) + ":");
  }
  return rep;
}
} // namespace detail

inline ResidualReport run_suite(const std::string &name, SuiteContext &ctx) {
  const auto &cfg = ctx.config();
  const std::size_t N = cfg.N;
  const auto &m = ctx.moments();
  if (name == "quasidet")
    return quasidet_identity_residual(cfg.seed, cfg.instances);
  if (name == "solver")
    return solver_equivalence_residual(cfg.seed, cfg.instances);
  if (name == "orthogonality")
    return orthogonality_residual(m, N, ctx.shifts());
  if (name == "recurrence")
    return recurrence_residual(m, N, ctx.shifts());
  if (name == "symmetric")
    return symmetric_family_residual(m, N);
  if (name == "toda_nonlinear")
    return toda_nonlinear_residual(ctx.jets(1), N);
  if (name == "toda_bilinear")
    return toda_bilinear_residual(ctx.jets(1), N);
  if (name == "hankel_derivative")
    return hankel_derivative_residual(ctx.jets(1), N);
  if (name == "wave_t1" || name == "wave_t2" || name == "wave_t3")
    return wave_evolution_residual(ctx.jets(static_cast<std::size_t>(name.back() - '0')), N);
  if (name == "t2_nonlinear")
    return t2_nonlinear_residual(ctx.jets(2), N);
  if (name == "discrete_toda")
    return detail::over_shifts(name, {0, 1},
                               [&](std::size_t l) { return discrete_toda_residual(m, N, l); });
  if (name == "christoffel")
    return detail::over_shifts(name, {0, 1},
                               [&](std::size_t l) { return christoffel_residual(m, N, l); });
  if (name == "geronimus")
    return detail::over_shifts(name, {0, 1},
                               [&](std::size_t l) { return geronimus_residual(m, N, l); });
  if (name == "discrete_compat")
    return discrete_compatibility_residual(m, N, 1);
  if (name == "volterra")
    return volterra_residual(ctx.volterra_jets(), N);
  if (name == "backlund")
    return backlund_residual(ctx.volterra_jets(), N);
  throw ConfigError("unknown suite \"" + name + "\"");
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// Report minus the metadata block; what determinism is judged on.
inline json strip_metadata(json report) {
  report.erase("metadata");
  return report;
}

/// Writes `<dir>/<stem>-<hash>.json`, never overwriting: an existing name
/// gets a numeric suffix.
inline std::string write_append_only(const std::string &dir, const std::string &stem,
                                     const std::string &ext, const std::string &content) {
  std::filesystem::create_directories(dir);
  std::filesystem::path path = std::filesystem::path(dir) / (stem + ext);
  for (int k = 1; std::filesystem::exists(path); ++k)
    path = std::filesystem::path(dir) / (stem + "-" + std::to_string(k) + ext);
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot write " + path.string());
  out << content;
  return path.string();
}

inline std::string selection_stem(const RunConfig &cfg) {
  if (std::find(cfg.suites.begin(), cfg.suites.end(), "all") != cfg.suites.end())
    return "all";
  if (cfg.suites.size() == 1)
    return cfg.suites.front();
  return "selection";
}

struct VerifyOutcome {
  int exit_code = Pass;
  json report;
  std::string path;
};

/// Runs the selected suites. Errors in configuration or validation surface as
/// exit codes with a message on `log`; nothing is written in those cases.
inline VerifyOutcome run_verify(const RunConfig &cfg, std::ostream &log, bool write = true) {
  VerifyOutcome out;
  std::vector<std::string> names;
  MeasureSpec spec;
  try {
    check_config(cfg);
    spec = resolve_measure(cfg);
    ensure_valid(spec, cfg.N);
    names = resolve_suites(cfg, spec.even);
  } catch (const ValidationError &e) {
    log << "validation failed: " << e.what() << "\n";
    out.exit_code = ValidationFailed;
    return out;
  } catch (const ConfigError &e) {
    log << "config error: " << e.what() << "\n";
    out.exit_code = ConfigFailed;
    return out;
  } catch (const ParseError &e) {
    log << "config error: " << e.what() << "\n";
    out.exit_code = ConfigFailed;
    return out;
  }

  SuiteContext ctx(cfg, spec);
  json report;
  report["config"] = config_to_json(cfg);
  json suites = json::object();
  bool all_pass = true;
  for (const auto &name : names) {
    ResidualReport r = [&] {
      try {
        return run_suite(name, ctx);
      } catch (const ValidationError &) {
        throw;
      } catch (const Error &e) {
        // Depth or order shortfalls are bugs in the table sizing, not
        // identity failures; report them as an undefined suite.
        ResidualReport bad(name);
        bad.record_undefined(0, "setup", e.what());
        return bad;
      }
    }();
    const bool pass = r.pass();
    all_pass = all_pass && pass;
    log << (pass ? "PASS " : "FAIL ") << name << "  sites=" << r.sites().size()
        << " undefined=" << r.undefined_count() << "\n";
    if (!pass) {
      if (const auto *f = r.first_failure())
        log << "  first nonzero residual at n=" << f->n << " [" << f->equation
            << "]: " << to_string(f->residual) << "\n";
      else
        log << "  no defined site\n";
    }
    suites[name] = report_to_json(r);
  }
  report["suites"] = std::move(suites);
  report["pass"] = all_pass;
  report["metadata"] = json{{"timestamp", utc_timestamp()}};
  out.exit_code = all_pass ? Pass : SuiteFailed;
  if (write) {
    const std::string hash = hex64(fnv1a64(report["config"].dump()));
    out.path = write_append_only(cfg.out_dir, selection_stem(cfg) + "-" + hash, ".json",
                                 report.dump(2) + "\n");
    log << "report: " << out.path << "\n";
  }
  out.report = std::move(report);
  return out;
}

/// Polynomial field for the KdV check: scalar when p = 1 (slope 5), else a
/// p x p field whose leading block does not commute with its second
/// derivative (slope 4).
inline MatrixPolynomialField kdv_field_for(std::size_t p) {
  if (p == 1)
    return default_kdv_field(true);
  const auto base = default_kdv_field(false);
  MatrixPolynomialField f;
  const long n = static_cast<long>(p);
  for (std::size_t k = 0; k < base.coeffs.size(); ++k) {
    KdvMatrix c = KdvMatrix::Zero(n, n);
    c.topLeftCorner(2, 2) = base.coeffs[k];
    for (long i = 2; i < n; ++i)
      c(i, i) = static_cast<long double>(k + 1) / static_cast<long double>(i + 1);
    f.coeffs.push_back(c);
  }
  return f;
}

struct KdvOutcome {
  int exit_code = Pass;
  KdvResult result;
  double predicted = 0;
  double threshold = 0;
  json report;
};

inline KdvOutcome run_kdv(const RunConfig &cfg, std::ostream &log, bool write = true) {
  KdvOutcome out;
  if (cfg.p == 0 || cfg.eps.size() < 2 || !(cfg.tolerance >= 0)) {
    log << "config error: kdv-limit needs p >= 1, two or more step sizes and a tolerance >= 0\n";
    out.exit_code = ConfigFailed;
    return out;
  }
  std::vector<long double> eps(cfg.eps.begin(), cfg.eps.end());
  out.predicted = cfg.p == 1 ? 5.0 : 4.0;
  out.threshold = out.predicted - cfg.tolerance;
  out.result = kdv_limit_slope(kdv_field_for(cfg.p), cfg.kdv_x, eps);
  const bool pass = out.result.all_zero || static_cast<double>(out.result.slope) >= out.threshold;
  out.exit_code = pass ? Pass : SuiteFailed;

  std::ostringstream csv;
  csv << "eps,norm,log_eps,log_norm\n" << std::setprecision(17);
  json sites = json::array();
  for (const auto &s : out.result.samples) {
    const double e = static_cast<double>(s.eps), nrm = static_cast<double>(s.norm);
    csv << e << ',' << nrm << ',' << std::log(e) << ',';
    if (nrm > 0)
      csv << std::log(nrm);
    csv << '\n';
    sites.push_back(json{{"eps", e}, {"norm", nrm}});
  }
  json cfg_echo{{"p", cfg.p},     {"eps", cfg.eps},           {"x", cfg.kdv_x},
                {"tolerance", cfg.tolerance}, {"out", cfg.out_dir}};
  json suite{{"params", {{"predicted_slope", out.predicted}, {"threshold", out.threshold}}},
             {"sites", sites},
             {"slope", out.result.all_zero ? json(nullptr) : json(static_cast<double>(out.result.slope))},
             {"all_zero", out.result.all_zero},
             {"pass", pass}};
  out.report = json{{"config", cfg_echo},
                    {"suites", {{"kdv_limit", suite}}},
                    {"pass", pass},
                    {"metadata", {{"timestamp", utc_timestamp()}}}};

  log << std::setprecision(6) << "slope " << static_cast<double>(out.result.slope)
      << " (predicted " << out.predicted << ", threshold " << out.threshold << ") "
      << (pass ? "PASS" : "FAIL") << "\n";
  if (write) {
    const std::string stem = "kdv_limit-" + hex64(fnv1a64(cfg_echo.dump()));
    log << "csv: " << write_append_only(cfg.out_dir, stem, ".csv", csv.str()) << "\n";
    log << "report: " << write_append_only(cfg.out_dir, stem, ".json", out.report.dump(2) + "\n")
        << "\n";
  }
  return out;
}

/// Human-readable summary of a JSON report.
inline void print_report(const json &report, std::ostream &os) {
  if (!report.is_object() || !report.contains("suites"))
    throw ParseError("not a report: missing \"suites\"");
  if (report.contains("config"))
    os << "config: " << report["config"].dump() << "\n";
  for (const auto &[name, suite] : report["suites"].items()) {
    const auto &sites = suite.value("sites", json::array());
    std::size_t zero = 0, undefined = 0;
    for (const auto &s : sites) {
      zero += s.value("exact_zero", false) ? 1 : 0;
      undefined += s.value("defined", true) ? 0 : 1;
    }
    os << (suite.value("pass", false) ? "PASS " : "FAIL ") << std::left << std::setw(18) << name
       << " sites=" << sites.size() << " exact_zero=" << zero << " undefined=" << undefined;
    if (suite.contains("slope") && !suite["slope"].is_null())
      os << " slope=" << suite["slope"].get<double>();
    os << "\n";
    for (const auto &s : sites)
      if (s.value("defined", true) && s.contains("exact_zero") && !s["exact_zero"].get<bool>())
        os << "    n=" << s.value("n", 0L) << " " << s.value("equation", std::string())
           << " residual=" << s.value("residual", std::string()) << "\n";
  }
  os << "overall: " << (report.value("pass", false) ? "PASS" : "FAIL") << "\n";
}

} // namespace ncint::cli
