#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypflow/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Proximal point flows on hyperbolic model spaces"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string out_dir;
  unsigned jobs = 1;
  auto* run = app.add_subcommand("run", "run flows and verify the bounds");
  run->add_option("configs", configs, "experiment config files")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory (overrides the config)");
  run->add_option("--jobs", jobs, "configs run concurrently")->check(CLI::PositiveNumber);

  std::string space_path;
  bool exhaustive = false;
  std::string delta_out = ".";
  auto* delta = app.add_subcommand("delta", "estimate the four-point hyperbolicity constant");
  delta->add_option("space", space_path, "space description")->required()->check(CLI::ExistingFile);
  delta->add_flag("--exhaustive", exhaustive, "use every quadruple of the sample");
  delta->add_option("--out", delta_out, "directory for delta.json");

  std::string slope_space;
  std::string slope_fn;
  auto* slopes = app.add_subcommand("slopes", "asymptotic slopes over the boundary directions");
  slopes->add_option("space", slope_space, "space description")->required()->check(CLI::ExistingFile);
  slopes->add_option("function", slope_fn, "function description")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    hypflow::RunOptions opts;
    if (!out_dir.empty()) opts.out_dir = out_dir;
    opts.jobs = jobs;
    if (const char* seed = std::getenv("HYPFLOW_SEED")) {
      try {
        opts.seed_override = std::stoull(seed);
      } catch (const std::exception&) {
        std::cerr << "HYPFLOW_SEED must be a nonnegative integer\n";
        return 2;
      }
    }
    return hypflow::cmd_run(configs, opts, std::cout, std::cerr);
  }
  if (delta->parsed()) return hypflow::cmd_delta(space_path, exhaustive, delta_out, std::cout, std::cerr);
  return hypflow::cmd_slopes(slope_space, slope_fn, std::cout, std::cerr);
}
