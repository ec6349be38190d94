#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ncint/errors.hpp"
#include "ncint/jet.hpp"
#include "ncint/matrix.hpp"
#include "ncint/quasidet.hpp"

namespace ncint {

/// Finite atomic matrix measure sum_j W_j delta(x - x_j).
struct MeasureSpec {
  std::size_t p = 1;
  std::vector<Rational> nodes;
  std::vector<Matrix> weights;
  /// Asserts invariance under x -> -x (equal weights at +-x_j).
  bool even = false;
};

/// m_i = sum_j x_j^i W_j, exact.
inline Matrix compute_moment(const MeasureSpec &spec, std::size_t i) {
  if (spec.nodes.size() != spec.weights.size())
    throw DimensionMismatch("measure has " + std::to_string(spec.nodes.size()) + " nodes but " +
                            std::to_string(spec.weights.size()) + " weights");
  Matrix m(spec.p, spec.p);
  for (std::size_t j = 0; j < spec.nodes.size(); ++j) {
    Rational power = 1;
    for (std::size_t k = 0; k < i; ++k)
      power *= spec.nodes[j];
    if (sgn(power) != 0)
      m += spec.weights[j] * power;
  }
  return m;
}

/// Moment sequence m_0..m_depth over a ring (Matrix, or Jet for flows).
template <class R>
class Moments {
public:
  Moments() = default;
  explicit Moments(std::vector<R> m) : m_(std::move(m)) {
    if (m_.empty())
      throw DimensionMismatch("moment table needs at least m_0");
  }

  const R &operator[](std::size_t i) const {
    if (i >= m_.size())
      throw DepthExceeded("moment m_" + std::to_string(i) + " requested from a table of depth " +
                          std::to_string(depth()));
    return m_[i];
  }

  /// m_{shift + k}, the moments of x^shift dmu.
  const R &shifted(std::size_t shift, std::size_t k) const { return (*this)[shift + k]; }

  std::size_t depth() const noexcept { return m_.size() - 1; }
  std::size_t dim() const { return m_.front().rows(); }
  const std::vector<R> &all() const noexcept { return m_; }

private:
  std::vector<R> m_;
};

using MomentTable = Moments<Matrix>;

inline MomentTable moment_table(const MeasureSpec &spec, std::size_t depth) {
  std::vector<Matrix> m;
  m.reserve(depth + 1);
  for (std::size_t i = 0; i <= depth; ++i)
    m.push_back(compute_moment(spec, i));
  return MomentTable(std::move(m));
}

/// Moment jets for the t_k flow: J_i has coefficients c_r = m_{i + k r} / r!,
/// which encodes d/dt_k m_i = m_{i+k}.
struct MomentJetTable {
  std::size_t flow_index = 1;
  std::size_t order = 1;
  Moments<Jet> jets;
};

inline MomentJetTable build_jet_table(const MomentTable &table, std::size_t flow_index,
                                      std::size_t order, std::size_t depth) {
  if (flow_index == 0)
    throw DimensionMismatch("flow index must be positive");
  const std::size_t needed = depth + flow_index * order;
  if (table.depth() < needed)
    throw DepthExceeded("jet table of depth " + std::to_string(depth) + " for t_" +
                        std::to_string(flow_index) + " at order " + std::to_string(order) +
                        " needs moments up to m_" + std::to_string(needed) + ", have m_" +
                        std::to_string(table.depth()));
  std::vector<Jet> jets;
  jets.reserve(depth + 1);
  for (std::size_t i = 0; i <= depth; ++i) {
    std::vector<Matrix> c;
    c.reserve(order + 1);
    Rational fact = 1;
    for (std::size_t r = 0; r <= order; ++r) {
      if (r > 1)
        fact *= static_cast<unsigned long>(r);
      Matrix coeff = table[i + flow_index * r];
      coeff *= Rational(1) / fact;
      c.push_back(std::move(coeff));
    }
    jets.emplace_back(std::move(c));
  }
  return {flow_index, order, Moments<Jet>(std::move(jets))};
}

inline MomentJetTable build_jet_table(const MeasureSpec &spec, std::size_t flow_index,
                                      std::size_t order, std::size_t depth) {
  return build_jet_table(moment_table(spec, depth + flow_index * order), flow_index, order,
                         depth);
}

/// d_i = m_{2i}, the moment sequence of the measure pushed forward by x -> x^2.
template <class R>
Moments<R> even_part(const Moments<R> &m) {
  std::vector<R> d;
  for (std::size_t i = 0; 2 * i <= m.depth(); ++i)
    d.push_back(m[2 * i]);
  return Moments<R>(std::move(d));
}

/// (size+1) x (size+1) Hankel block (m_{shift+i+j}).
template <class R>
BlockMatrix<R> hankel_block(const Moments<R> &m, std::size_t shift, std::size_t size) {
  return BlockMatrix<R>::generate(size + 1, size + 1, [&](std::size_t i, std::size_t j) {
    return m.shifted(shift, i + j);
  });
}

template <class R>
bool odd_moments_vanish(const Moments<R> &m) {
  for (std::size_t i = 1; i <= m.depth(); i += 2)
    if (!value_of(m[i]).is_zero())
      return false;
  return true;
}

struct Diagnostic {
  ValidationIssue issue;
  std::string message;
};

struct Diagnostics {
  std::vector<Diagnostic> issues;
  bool ok() const noexcept { return issues.empty(); }
};

namespace detail {
inline bool invertible(const Matrix &m) {
  try {
    ExactLU lu(m);
    return true;
  } catch (const SingularMatrix &) {
    return false;
  }
}

inline void check_hankels(const MomentTable &m, const char *label, std::size_t shift,
                          std::size_t max_blocks, Diagnostics &out) {
  for (std::size_t n = 1; n <= max_blocks; ++n)
    if (!invertible(hankel_block(m, shift, n - 1).flatten())) {
      out.issues.push_back({ValidationIssue::InsufficientNodes,
                            std::string(label) + " Hankel block with shift " +
                                std::to_string(shift) + " and " + std::to_string(n) +
                                " block rows is singular"});
      return;
    }
}
} // namespace detail

/// Checks the measure can support truncation N:
///   - every weight symmetric,
///   - Hankel blocks Lambda_{n-1} for n <= N+1 invertible for shifts 0..3
///     (odd shifts skipped for even measures, whose odd moments vanish),
///   - for even measures, the +-x pairing and the d-moment Hankels for
///     shifts 0 and 1, one block further (the Volterra chain reaches N+1).
inline Diagnostics validate(const MeasureSpec &spec, std::size_t truncation) {
  Diagnostics out;
  if (spec.nodes.size() != spec.weights.size() || spec.nodes.empty()) {
    out.issues.push_back({ValidationIssue::Malformed, "node and weight counts differ or are zero"});
    return out;
  }
  for (std::size_t j = 0; j < spec.weights.size(); ++j) {
    const auto &w = spec.weights[j];
    if (w.rows() != spec.p || w.cols() != spec.p) {
      out.issues.push_back({ValidationIssue::Malformed,
                            "weight " + std::to_string(j) + " is " + w.shape()});
      return out;
    }
    if (!w.is_symmetric())
      out.issues.push_back(
          {ValidationIssue::AsymmetricWeight, "weight " + std::to_string(j) + " is not symmetric"});
  }
  for (std::size_t a = 0; a < spec.nodes.size(); ++a)
    for (std::size_t b = a + 1; b < spec.nodes.size(); ++b)
      if (spec.nodes[a] == spec.nodes[b])
        out.issues.push_back({ValidationIssue::Malformed,
                              "duplicate node " + to_string(spec.nodes[a])});
  if (spec.even) {
    for (std::size_t j = 0; j < spec.nodes.size(); ++j) {
      if (sgn(spec.nodes[j]) == 0)
        continue;
      bool paired = false;
      for (std::size_t k = 0; k < spec.nodes.size(); ++k)
        if (spec.nodes[k] == -spec.nodes[j] && spec.weights[k] == spec.weights[j])
          paired = true;
      if (!paired)
        out.issues.push_back({ValidationIssue::NotEvenMeasure,
                              "node " + to_string(spec.nodes[j]) +
                                  " has no mirror node with an equal weight"});
    }
  }
  if (!out.ok())
    return out;

  const std::size_t blocks = truncation + 1;
  const MomentTable m = moment_table(spec, 4 * blocks + 4);
  for (std::size_t shift = 0; shift <= 3; ++shift) {
    if (spec.even && shift % 2 == 1)
      continue;
    detail::check_hankels(m, "moment", shift, blocks, out);
  }
  if (spec.even) {
    const MomentTable d = even_part(m);
    detail::check_hankels(d, "even-part", 0, blocks + 1, out);
    detail::check_hankels(d, "even-part", 1, blocks + 1, out);
  }
  return out;
}

/// Throws ValidationError for the first issue found.
inline void ensure_valid(const MeasureSpec &spec, std::size_t truncation) {
  const auto diag = validate(spec, truncation);
  if (!diag.ok())
    throw ValidationError(diag.issues.front().issue, diag.issues.front().message);
}

} // namespace ncint
