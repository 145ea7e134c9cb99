#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace driftfuse {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  int parallel = 1;
};

/// Runs one scenario and writes run.csv, measurements.csv, imu.csv,
/// fused.csv, summary.csv and replay.cfg into out_dir.
void cmd_simulate(const std::string& config_path, const std::string& out_dir,
                  const RunOverrides& overrides = {});

/// Runs the delay x noise grid and writes sweep.csv, seeds.csv, sweep.md.
void cmd_sweep(const std::string& config_path, const std::string& grid_path,
               const std::string& out_dir, const RunOverrides& overrides = {});

/// Replays logged streams through the estimator and writes fused.csv, plus
/// summary.csv when the log carries ground-truth columns. An empty
/// config_path falls back to <log_dir>/replay.cfg.
void cmd_replay(const std::string& log_dir, const std::string& config_path,
                const std::string& out_dir);

}  // namespace driftfuse
