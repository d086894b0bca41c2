#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zerolab/app.hpp"
#include "zerolab/error.hpp"
#include "zerolab/scenarios.hpp"
#include "zerolab/suite.hpp"

namespace {

// ZERO_LAB_SEED wins over --seed.
std::uint64_t effective_seed(std::uint64_t flag) {
  if (const char* env = std::getenv("ZERO_LAB_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw zlab::ConfigError(std::string("ZERO_LAB_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return flag;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"zero_lab: zero numbers of 1D parabolic problems"};
  cli.require_subcommand(1);

  std::string config, out;
  zlab::app::RunOptions ropts;
  auto* run = cli.add_subcommand("run", "solve one scenario and write its outputs");
  run->add_option("config", config, "JSON file or builtin scenario name")->required();
  run->add_option("-o,--out", out, "output directory (default out/<id>)");
  run->add_flag("--checks", ropts.checks, "run the check suite and write report.txt");
  run->add_flag("--plots", ropts.plots, "write plots/*.svg");
  run->add_flag("--export", ropts.export_trajectory, "write trajectory.csv and snapshots.bin");
  run->add_option("--seed", ropts.seed, "seed recorded in the manifest");

  zlab::suite::SuiteOptions sopts;
  bool verbose = false;
  auto* suite = cli.add_subcommand("suite", "run the acceptance criteria");
  suite->add_option("--filter", sopts.filter, "comma-separated ids or tags, e.g. A2,stefan");
  suite->add_option("--seed", sopts.seed, "seed of the randomized criteria");
  suite->add_option("--jobs", sopts.jobs, "worker threads")->check(CLI::PositiveNumber);
  suite->add_flag("-v,--verbose", verbose, "print details of passing criteria too");

  auto* list = cli.add_subcommand("list", "print the builtin scenario names");

  CLI11_PARSE(cli, argc, argv);

  try {
    if (*list) {
      for (const auto& n : zlab::scenarios::builtin_names()) std::cout << n << '\n';
      return 0;
    }
    if (*run) {
      ropts.seed = effective_seed(ropts.seed);
      const auto cfg = zlab::app::load_config(config);
      const auto m = zlab::app::run(cfg, out.empty() ? "out/" + cfg.id : out, ropts);
      std::cout << m.to_json().dump(2) << '\n';
      return m.checked && !m.passed ? 1 : 0;
    }
    if (*suite) {
      sopts.seed = effective_seed(sopts.seed);
      std::cout << "seed " << sopts.seed << '\n';
      const auto s = zlab::suite::run_suite(sopts);
      std::cout << s.table(verbose);
      return s.passed() ? 0 : 1;
    }
  } catch (const zlab::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "zero_lab: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
