// ncint: exact verification runs from the command line.
//
//   ncint verify --all --p 2 --n 3 --seed 7
//   ncint verify --suite volterra --even --nodes 5
//   ncint kdv-limit --p 2 --eps 0.1,0.05,0.025
//   ncint gen-measure --p 3 --nodes 5 --seed 1 --even
//   ncint report reports/all-<hash>.json

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncint/cli/config.hpp"
#include "ncint/cli/json_io.hpp"
#include "ncint/cli/runner.hpp"

namespace cli = ncint::cli;

namespace {

struct Flags {
  std::string config_file;
  std::string measure_file;
  std::size_t p = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t nodes = 0;
  bool even = false;
  bool all = false;
  std::vector<std::string> suites;
  std::size_t jet_order = 0;
  std::size_t instances = 0;
  std::string out;
  std::string eps;
  double tolerance = 0;
};

void add_common(CLI::App *cmd, Flags &f, const char *out_help = "output directory") {
  cmd->add_option("--config", f.config_file, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--p", f.p, "block size p");
  cmd->add_option("--out", f.out, out_help);
  cmd->add_option("--tolerance", f.tolerance, "slack for float suites");
}

void add_measure(CLI::App *cmd, Flags &f) {
  cmd->add_option("--seed", f.seed, "measure seed (default: $NCINT_SEED or 0)");
  cmd->add_option("--nodes", f.nodes, "node count (mirror pairs when --even)");
  cmd->add_flag("--even", f.even, "symmetric measure");
}

// Config file first, then explicit flags on top.
cli::RunConfig resolve(const CLI::App &cmd, const Flags &f) {
  cli::RunConfig cfg;
  cfg.seed = cli::default_seed();
  if (!f.config_file.empty())
    cli::apply_config_json(cfg, cli::read_json_file(f.config_file));
  const auto given = [&](const char *name) {
    try {
      return cmd.get_option(name)->count() > 0;
    } catch (const CLI::OptionNotFound &) {
      return false;
    }
  };
  if (given("--p"))
    cfg.p = f.p;
  if (given("--n"))
    cfg.N = f.n;
  if (given("--seed"))
    cfg.seed = f.seed;
  if (given("--nodes"))
    cfg.node_count = f.nodes;
  if (given("--even"))
    cfg.even = f.even;
  if (given("--jet-order"))
    cfg.jet_order = f.jet_order;
  if (given("--instances"))
    cfg.instances = f.instances;
  if (given("--out"))
    cfg.out_dir = f.out;
  if (given("--tolerance"))
    cfg.tolerance = f.tolerance;
  if (given("--eps"))
    cfg.eps = cli::parse_eps_list(f.eps);
  if (given("--measure")) {
    auto spec = ncint::cli::measure_from_json(cli::read_json_file(f.measure_file));
    if (!given("--p"))
      cfg.p = spec.p;
    cfg.measure = std::move(spec);
  }
  if (given("--suite"))
    cfg.suites = f.suites;
  if (f.all)
    cfg.suites = {"all"};
  return cfg;
}

int gen_measure(const cli::RunConfig &cfg, const std::string &out) {
  if (cfg.p == 0 || cfg.resolved_node_count() == 0) {
    std::cerr << "config error: gen-measure needs p >= 1 and nodes >= 1\n";
    return cli::ConfigFailed;
  }
  const auto spec = ncint::gen_measure(cfg.p, cfg.resolved_node_count(), cfg.seed, cfg.even);
  cli::json j;
  j["source"] = "explicit";
  const auto body = cli::measure_to_json(spec);
  for (auto &[k, v] : body.items())
    j[k] = v;
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return cli::Pass;
  }
  std::ofstream f(out);
  if (!f) {
    std::cerr << "config error: cannot write " << out << "\n";
    return cli::ConfigFailed;
  }
  f << text;
  return cli::Pass;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact verification of matrix orthogonal polynomial lattice identities"};
  app.require_subcommand(1);
  Flags f;

  auto *verify = app.add_subcommand("verify", "run exact verification suites");
  add_common(verify, f);
  add_measure(verify, f);
  verify->add_option("--n", f.n, "truncation N");
  verify->add_option("--suite", f.suites, "suite name or 'all' (repeatable, comma list)")
      ->delimiter(',');
  verify->add_flag("--all", f.all, "same as --suite all");
  verify->add_option("--jet-order", f.jet_order, "Taylor order of moment jets");
  verify->add_option("--instances", f.instances, "random instances per shape (quasidet, solver)");
  verify->add_option("--measure", f.measure_file, "explicit measure JSON (see gen-measure)")
      ->check(CLI::ExistingFile);

  auto *kdv = app.add_subcommand("kdv-limit", "continuum-limit order check (floating point)");
  add_common(kdv, f);
  kdv->add_option("--eps", f.eps, "comma-separated step sizes");

  auto *gen = app.add_subcommand("gen-measure", "print a seeded random measure as JSON");
  add_common(gen, f, "output file (default: stdout)");
  add_measure(gen, f);

  std::vector<std::string> report_files;
  auto *report = app.add_subcommand("report", "pretty-print JSON reports");
  report->add_option("files", report_files, "report files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return cli::ConfigFailed;
  }

  try {
    if (*verify)
      return cli::run_verify(resolve(*verify, f), std::cout).exit_code;
    if (*kdv)
      return cli::run_kdv(resolve(*kdv, f), std::cout).exit_code;
    if (*gen)
      return gen_measure(resolve(*gen, f), f.out);
    if (*report) {
      for (const auto &file : report_files) {
        if (report_files.size() > 1)
          std::cout << "== " << file << "\n";
        cli::print_report(cli::read_json_file(file), std::cout);
      }
      return cli::Pass;
    }
  } catch (const ncint::ValidationError &e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return cli::ValidationFailed;
  } catch (const ncint::ParseError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::ConfigFailed;
  } catch (const ncint::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::ConfigFailed;
  } catch (const cli::json::exception &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::ConfigFailed;
  }
  return cli::ConfigFailed;
}
