#pragma once

#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "ncint/errors.hpp"
#include "ncint/rational.hpp"

namespace ncint {

struct SiteResidual {
  long n = 0;
  std::string equation;
  bool defined = true;
  /// max over entries of |residual|, exact.
  Rational residual;
  std::string note;

  bool exact_zero() const { return defined && sgn(residual) == 0; }
};

/// Per-site residuals of one verification suite.
///
/// A site whose ingredients involve an undefined quasi-determinant (a
/// singular block, e.g. odd-shift Hankels of an even measure) is recorded as
/// undefined instead of aborting the suite. The suite passes when every
/// defined site is exactly zero and at least one site is defined.
class ResidualReport {
public:
  explicit ResidualReport(std::string suite) : suite_(std::move(suite)) {}

  const std::string &suite() const noexcept { return suite_; }
  const std::vector<std::pair<std::string, std::string>> &params() const noexcept {
    return params_;
  }
  const std::vector<SiteResidual> &sites() const noexcept { return sites_; }

  ResidualReport &param(std::string key, std::string value) {
    params_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  ResidualReport &param(std::string key, std::size_t value) {
    return param(std::move(key), std::to_string(value));
  }

  void record(long n, std::string equation, Rational residual) {
    sites_.push_back({n, std::move(equation), true, std::move(residual), {}});
  }

  void record_undefined(long n, std::string equation, std::string why) {
    sites_.push_back({n, std::move(equation), false, Rational(0), std::move(why)});
  }

  /// Runs f() -> Rational for one site, mapping singular blocks to an
  /// undefined site. Other errors propagate.
  template <class F>
  void evaluate(long n, const std::string &equation, F &&f) {
    // gmpxx expression templates returned from a lambda dangle.
    static_assert(std::is_same_v<std::invoke_result_t<F &>, Rational>,
                  "site lambdas must return Rational");
    try {
      record(n, equation, f());
    } catch (const SingularMatrix &e) {
      record_undefined(n, equation, e.what());
    }
  }

  /// Appends all sites of another report, prefixing their equation labels.
  void absorb(const ResidualReport &other, const std::string &prefix) {
    for (auto s : other.sites_) {
      s.equation = prefix + s.equation;
      sites_.push_back(std::move(s));
    }
  }

  std::size_t defined_count() const {
    std::size_t c = 0;
    for (const auto &s : sites_)
      c += s.defined ? 1 : 0;
    return c;
  }

  std::size_t undefined_count() const { return sites_.size() - defined_count(); }

  const SiteResidual *first_failure() const {
    for (const auto &s : sites_)
      if (s.defined && !s.exact_zero())
        return &s;
    return nullptr;
  }

  Rational max_residual() const {
    Rational best = 0;
    for (const auto &s : sites_)
      if (s.defined && s.residual > best)
        best = s.residual;
    return best;
  }

  bool pass() const { return defined_count() > 0 && first_failure() == nullptr; }

private:
  std::string suite_;
  std::vector<std::pair<std::string, std::string>> params_;
  std::vector<SiteResidual> sites_;
};

} // namespace ncint
