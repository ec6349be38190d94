#pragma once

#include <cctype>
#include <cstdio>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "ncint/errors.hpp"

namespace ncint {

/// Exact rational scalar. GMP keeps it canonical (lowest terms, positive
/// denominator) after every arithmetic operation.
using Rational = mpq_class;

namespace detail {
inline bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+'))
    s.remove_prefix(1);
  if (s.empty())
    return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return false;
  return true;
}
} // namespace detail

/// Parses "num/den" or "num". Rejects zero denominators and anything that is
/// not a plain integer literal on either side.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  std::string num(text.substr(0, slash));
  std::string den = slash == std::string_view::npos ? "1" : std::string(text.substr(slash + 1));
  if (!detail::is_integer_literal(num) || !detail::is_integer_literal(den) ||
      den.front() == '-' || den.front() == '+')
    throw ParseError("not a rational literal: '" + std::string(text) + "'");
  if (num.front() == '+')
    num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0)
    throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

/// "num/den", or "num" when the denominator is one.
inline std::string to_string(const Rational &q) { return q.get_str(10); }

/// Scientific rendering for display only.
inline std::string to_decimal(const Rational &q, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits, q.get_d());
  return buf;
}

} // namespace ncint
