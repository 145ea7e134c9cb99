#include "driftfuse/runner.hpp"

#include <filesystem>

#include "driftfuse/config.hpp"
#include "driftfuse/logs.hpp"

namespace driftfuse {

void cmd_simulate(const std::string& config_path, const std::string& out_dir,
                  const RunOverrides& overrides) {
  ScenarioConfig config = load_scenario_config(config_path);
  if (overrides.seed) {
    config.seed = *overrides.seed;
  }
  const RunLog log = run_scenario(config);
  std::filesystem::create_directories(out_dir);
  write_run_log(log, out_dir);
  write_summary(compute_run_stats(log),
                (std::filesystem::path(out_dir) / "summary.csv").string());
  write_replay_config(
      (std::filesystem::path(out_dir) / "replay.cfg").string(), config);
}

void cmd_sweep(const std::string& config_path, const std::string& grid_path,
               const std::string& out_dir, const RunOverrides& overrides) {
  ScenarioConfig config = load_scenario_config(config_path);
  SweepGrid grid = load_sweep_grid(grid_path);
  if (overrides.seed) {
    config.seed = *overrides.seed;
  }
  if (overrides.trials) {
    grid.trials = *overrides.trials;
  }
  const SweepResult result = run_sweep(grid, config, overrides.parallel);
  std::filesystem::create_directories(out_dir);
  write_sweep_outputs(result, out_dir);
}

void cmd_replay(const std::string& log_dir, const std::string& config_path,
                const std::string& out_dir) {
  const std::string effective_config =
      config_path.empty()
          ? (std::filesystem::path(log_dir) / "replay.cfg").string()
          : config_path;
  const PipelineParams params = load_pipeline_params(effective_config);
  const ReplayInput input = read_replay_input(log_dir);

  EstimatorPipeline pipeline(params);
  const DriveResult result =
      drive_pipeline(pipeline, input.odometry, input.imu, input.measurements);

  std::filesystem::create_directories(out_dir);
  write_fused_log(result.rows,
                  (std::filesystem::path(out_dir) / "fused.csv").string());

  if (input.has_gt) {
    std::vector<State12> fused, vio;
    fused.reserve(result.rows.size());
    vio.reserve(input.odometry.size());
    for (const FusedRow& row : result.rows) {
      fused.push_back({row.state.position, row.state.orientation_rpy,
                       row.state.velocity_world, row.state.body_rates});
    }
    for (const WorldOdometry& s : input.odometry) {
      vio.push_back(vio_world_state(s));
    }
    const RunStats stats{aggregate(state_errors(fused, input.gt)),
                         aggregate(state_errors(vio, input.gt))};
    write_summary(stats,
                  (std::filesystem::path(out_dir) / "summary.csv").string());
  }
}

}  // namespace driftfuse
