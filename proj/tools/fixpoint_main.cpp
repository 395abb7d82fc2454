// fixpoint command line: certify contractive conditions by sampling, scan
// the enriched parameter k, run Krasnoselskij iterations with verified
// error bounds, and reproduce the classical one-dimensional examples.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fixpoint/cli.hpp"
#include "fixpoint/demo.hpp"

namespace {

void add_common_flags(CLI::App* cmd, fixpoint::CliOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file (flags override it)");
  cmd->add_option("--mapping", opts.mapping, "builtin name, inline JSON, or @file");
  cmd->add_option("--kind", opts.kind, "condition kind, e.g. chatterjea, enriched-chatterjea");
  cmd->add_option("--params", opts.params, "constants as name=value pairs, e.g. k=0.5,b=0.25");
  cmd->add_option("--k-grid", opts.k_grid, "k values as a:b:step or a comma list");
  cmd->add_option("--seed", opts.seed, "sampler seed (FIXPOINT_SEED is the fallback)");
  cmd->add_option("--norm", opts.norm, "l1 | l2 | linf");
  cmd->add_option("--grid", opts.grid, "sampler grid points per axis");
  cmd->add_option("--random", opts.random, "sampler random pair count");
  cmd->add_option("--x0", opts.x0, "start point, comma-separated coordinates");
  cmd->add_option("--lambda", opts.lambda, "averaging parameter in (0,1]");
  cmd->add_option("--epsilon", opts.epsilon, "stopping tolerance");
  cmd->add_option("--max-iter", opts.max_iter, "iteration cap");
  cmd->add_option("--stop-rule", opts.stop_rule, "a-posteriori=DELTA | step-norm | max-iter");
  cmd->add_option("--out-json", opts.out_json, "write the JSON report here");
  cmd->add_option("--out-csv", opts.out_csv, "write the trace CSV here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixed-point laboratory: certify, scan, iterate, solve, demo"};
  app.require_subcommand(1);

  fixpoint::CliOptions opts;
  for (const char* name : {"certify", "scan", "iterate", "solve", "demo"}) {
    CLI::App* sub = app.add_subcommand(name);
    if (std::string(name) != "demo") add_common_flags(sub, opts);
    sub->callback([&opts, name] { opts.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (opts.command == "demo") return fixpoint::cmd_demo(std::cout);
    const fixpoint::RunConfig rc = fixpoint::resolve_config(opts);
    if (opts.command == "certify") return fixpoint::cmd_certify(rc, std::cout);
    if (opts.command == "scan") return fixpoint::cmd_scan(rc, std::cout);
    if (opts.command == "iterate") return fixpoint::cmd_iterate(rc, std::cout);
    if (opts.command == "solve") return fixpoint::cmd_solve(rc, std::cout);
    std::cerr << "unknown command\n";
    return 2;
  } catch (const fixpoint::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
