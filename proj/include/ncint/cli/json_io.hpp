#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ncint/errors.hpp"
#include "ncint/matrix.hpp"
#include "ncint/moments.hpp"
#include "ncint/rational.hpp"
#include "ncint/residual_report.hpp"

namespace ncint::cli {

using json = nlohmann::ordered_json;

/// FNV-1a, 64 bit. Names report files; not a security hash.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4)
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return out;
}

inline Rational rational_from_json(const json &j) {
  if (j.is_string())
    return parse_rational(j.get<std::string>());
  if (j.is_number_integer())
    return Rational(j.get<long>());
  // Floats never enter the exact path.
  throw ParseError("rational must be a \"num/den\" string or an integer, got " + j.dump());
}

inline json matrix_to_json(const Matrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k)
      row.push_back(to_string(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json &j, std::size_t p) {
  if (!j.is_array() || j.size() != p)
    throw ParseError("weight must be a " + std::to_string(p) + "x" + std::to_string(p) +
                     " array of rows");
  Matrix m(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    if (!j[i].is_array() || j[i].size() != p)
      throw ParseError("weight row " + std::to_string(i) + " must have " + std::to_string(p) +
                       " entries");
    for (std::size_t k = 0; k < p; ++k)
      m(i, k) = rational_from_json(j[i][k]);
  }
  return m;
}

inline json measure_to_json(const MeasureSpec &spec) {
  json j;
  j["p"] = spec.p;
  j["even"] = spec.even;
  json nodes = json::array();
  for (const auto &x : spec.nodes)
    nodes.push_back(to_string(x));
  j["nodes"] = std::move(nodes);
  json weights = json::array();
  for (const auto &w : spec.weights)
    weights.push_back(matrix_to_json(w));
  j["weights"] = std::move(weights);
  return j;
}

inline MeasureSpec measure_from_json(const json &j) {
  if (!j.is_object())
    throw ParseError("measure must be an object");
  for (const char *key : {"p", "nodes", "weights"})
    if (!j.contains(key))
      throw ParseError(std::string("measure is missing \"") + key + "\"");
  MeasureSpec spec;
  if (!j["p"].is_number_unsigned() || j["p"].get<std::size_t>() == 0)
    throw ParseError("measure \"p\" must be a positive integer");
  spec.p = j["p"].get<std::size_t>();
  spec.even = j.value("even", false);
  if (!j["nodes"].is_array() || !j["weights"].is_array())
    throw ParseError("measure \"nodes\" and \"weights\" must be arrays");
  for (const auto &x : j["nodes"])
    spec.nodes.push_back(rational_from_json(x));
  for (const auto &w : j["weights"])
    spec.weights.push_back(matrix_from_json(w, spec.p));
  return spec;
}

inline json report_to_json(const ResidualReport &r) {
  json j;
  json params = json::object();
  for (const auto &[k, v] : r.params())
    params[k] = v;
  j["params"] = std::move(params);
  json sites = json::array();
  for (const auto &s : r.sites()) {
    json site;
    site["n"] = s.n;
    site["equation"] = s.equation;
    site["defined"] = s.defined;
    if (s.defined) {
      site["residual"] = to_string(s.residual);
      site["residual_decimal"] = to_decimal(s.residual);
    } else {
      site["note"] = s.note;
    }
    site["exact_zero"] = s.exact_zero();
    sites.push_back(std::move(site));
  }
  j["sites"] = std::move(sites);
  j["pass"] = r.pass();
  return j;
}

} // namespace ncint::cli
