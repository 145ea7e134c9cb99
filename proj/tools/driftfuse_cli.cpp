// Command-line front end; all real work happens behind the C API of the
// shared library.
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "driftfuse.h"

namespace {

int exit_code_for(df_status status) {
  switch (status) {
    case DF_OK:
      return 0;
    case DF_ERR_INVALID_ARGUMENT:
    case DF_ERR_CONFIG:
      return 1;  // usage / configuration problem
    default:
      return 2;  // runtime / data problem
  }
}

int finish(df_status status) {
  if (status != DF_OK) {
    std::fprintf(stderr, "error (%s): %s\n", df_status_name(status),
                 df_last_error());
  }
  return exit_code_for(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VIO drift estimation, sensor fusion, and the Monte-Carlo "
               "evaluation harness"};
  app.require_subcommand(1);

  std::string config_path, grid_path, out_dir, log_dir;
  std::uint64_t seed = 0;
  int trials = 0;
  int parallel = 1;

  auto* simulate = app.add_subcommand("simulate", "run one scenario");
  simulate->add_option("--config", config_path, "scenario config file")
      ->required();
  simulate->add_option("--out", out_dir, "output directory")->required();
  auto* sim_seed = simulate->add_option("--seed", seed, "override the RNG seed");

  auto* sweep = app.add_subcommand("sweep", "run the delay x noise grid");
  sweep->add_option("--config", config_path, "scenario config file")
      ->required();
  sweep->add_option("--grid", grid_path, "sweep grid file")->required();
  sweep->add_option("--out", out_dir, "output directory")->required();
  auto* sweep_seed = sweep->add_option("--seed", seed, "override the master seed");
  sweep->add_option("--trials", trials, "override trials per cell");
  sweep->add_option("--parallel", parallel, "worker threads");

  auto* replay = app.add_subcommand("replay", "replay logs through the estimator");
  replay->add_option("--log", log_dir, "log directory (run.csv etc.)")
      ->required();
  replay->add_option("--config", config_path,
                     "estimator config (default: <log>/replay.cfg)");
  replay->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  df_run_options options{};
  options.trials = trials;
  options.parallel = parallel;

  if (simulate->parsed()) {
    options.has_seed = !sim_seed->empty();
    options.seed = seed;
    return finish(df_simulate(config_path.c_str(), out_dir.c_str(), &options));
  }
  if (sweep->parsed()) {
    options.has_seed = !sweep_seed->empty();
    options.seed = seed;
    return finish(df_sweep(config_path.c_str(), grid_path.c_str(),
                           out_dir.c_str(), &options));
  }
  return finish(df_replay(log_dir.c_str(),
                          config_path.empty() ? nullptr : config_path.c_str(),
                          out_dir.c_str()));
}
