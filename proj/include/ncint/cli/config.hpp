#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncint/cli/json_io.hpp"
#include "ncint/errors.hpp"
#include "ncint/moments.hpp"

namespace ncint::cli {

/// Fully resolved run configuration. Every default is materialized before a
/// run so the echo in each report reproduces it.
struct RunConfig {
  std::size_t p = 2;
  std::size_t N = 3;
  std::size_t jet_order = 2;
  /// Random measure parameters; ignored when `measure` is set.
  std::size_t node_count = 0; // 0: N + 2
  std::uint64_t seed = 0;
  bool even = false;
  std::optional<MeasureSpec> measure;
  std::vector<std::string> suites{"all"};
  std::string out_dir = "reports";
  /// Instances per (n, p) for the random quasi-determinant suites.
  std::size_t instances = 10;
  /// Float suites only: allowed distance below the predicted KdV slope.
  double tolerance = 0.3;
  std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  double kdv_x = 0.3;

  std::size_t resolved_node_count() const { return node_count ? node_count : N + 2; }
};

/// Seed default from NCINT_SEED, else 0.
inline std::uint64_t default_seed() {
  const char *env = std::getenv("NCINT_SEED");
  if (!env || !*env)
    return 0;
  char *end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || env[0] == '-')
    throw ConfigError(std::string("NCINT_SEED is not an unsigned integer: ") + env);
  return v;
}

inline std::vector<double> parse_eps_list(const std::string &s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception &) {
      throw ParseError("bad step size \"" + item + "\"");
    }
    if (used != item.size() || !(v > 0))
      throw ParseError("bad step size \"" + item + "\"");
    out.push_back(v);
  }
  if (out.size() < 2)
    throw ConfigError("--eps needs at least two values");
  return out;
}

namespace detail {
template <class T>
T get_field(const json &j, const char *key, T fallback) {
  if (!j.contains(key))
    return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ParseError(std::string("config field \"") + key + "\": " + e.what());
  }
}
} // namespace detail

inline json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Overlays a JSON config onto `cfg`. Unknown keys are rejected so typos do
/// not silently fall back to defaults.
inline void apply_config_json(RunConfig &cfg, const json &j) {
  if (!j.is_object())
    throw ParseError("config must be a JSON object");
  static const std::vector<std::string> known = {"p",       "N",         "jet_order", "measure",
                                                 "suites",  "out",       "instances", "tolerance",
                                                 "eps",     "kdv_x"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ParseError("unknown config field \"" + it.key() + "\"");
  cfg.p = detail::get_field(j, "p", cfg.p);
  cfg.N = detail::get_field(j, "N", cfg.N);
  cfg.jet_order = detail::get_field(j, "jet_order", cfg.jet_order);
  cfg.out_dir = detail::get_field(j, "out", cfg.out_dir);
  cfg.instances = detail::get_field(j, "instances", cfg.instances);
  cfg.tolerance = detail::get_field(j, "tolerance", cfg.tolerance);
  cfg.kdv_x = detail::get_field(j, "kdv_x", cfg.kdv_x);
  cfg.eps = detail::get_field(j, "eps", cfg.eps);
  cfg.suites = detail::get_field(j, "suites", cfg.suites);
  if (j.contains("measure")) {
    const json &m = j["measure"];
    const std::string source = detail::get_field<std::string>(m, "source", "random");
    if (source == "random") {
      cfg.node_count = detail::get_field(m, "nodes", cfg.node_count);
      cfg.seed = detail::get_field(m, "seed", cfg.seed);
      cfg.even = detail::get_field(m, "even", cfg.even);
      cfg.measure.reset();
    } else if (source == "explicit") {
      cfg.measure = measure_from_json(m);
    } else {
      throw ParseError("measure source must be \"random\" or \"explicit\", got \"" + source + "\"");
    }
  }
}

inline void check_config(const RunConfig &cfg) {
  if (cfg.p == 0)
    throw ConfigError("p must be positive");
  if (cfg.N == 0)
    throw ConfigError("N must be positive");
  if (cfg.jet_order == 0)
    throw ConfigError("jet order must be at least 1");
  if (cfg.instances == 0)
    throw ConfigError("instances must be positive");
  if (!(cfg.tolerance >= 0))
    throw ConfigError("tolerance must be non-negative");
  if (cfg.suites.empty())
    throw ConfigError("no suites selected");
  if (cfg.measure && cfg.measure->p != cfg.p)
    throw ConfigError("explicit measure has p = " + std::to_string(cfg.measure->p) +
                      " but the run asks for p = " + std::to_string(cfg.p));
}

/// Canonical echo. Hashing this names the report file.
inline json config_to_json(const RunConfig &cfg) {
  json j;
  j["p"] = cfg.p;
  j["N"] = cfg.N;
  j["jet_order"] = cfg.jet_order;
  json m;
  if (cfg.measure) {
    m["source"] = "explicit";
    const json body = measure_to_json(*cfg.measure);
    for (auto &[k, v] : body.items())
      m[k] = v;
  } else {
    m["source"] = "random";
    m["nodes"] = cfg.resolved_node_count();
    m["seed"] = cfg.seed;
    m["even"] = cfg.even;
  }
  j["measure"] = std::move(m);
  j["suites"] = cfg.suites;
  j["out"] = cfg.out_dir;
  j["instances"] = cfg.instances;
  j["tolerance"] = cfg.tolerance;
  j["eps"] = cfg.eps;
  j["kdv_x"] = cfg.kdv_x;
  return j;
}

} // namespace ncint::cli
