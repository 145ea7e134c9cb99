#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "driftfuse/evaluation.hpp"
#include "driftfuse/pipeline.hpp"
#include "driftfuse/simulator.hpp"

namespace driftfuse {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);

/// Writes run.csv, measurements.csv, imu.csv and fused.csv into dir.
void write_run_log(const RunLog& log, const std::string& dir);

void write_fused_log(std::span<const FusedRow> rows, const std::string& path);

/// Per-run statistics table: one row per (stream, state group) with
/// rmse, mean, stddev and max columns.
void write_summary(const RunStats& stats, const std::string& path);

/// Writes sweep.csv, seeds.csv and sweep.md into dir.
void write_sweep_outputs(const SweepResult& result, const std::string& dir);

/// Streams recovered from a log directory for replay. Ground truth is
/// optional; malformed rows are skipped and counted.
struct ReplayInput {
  std::vector<WorldOdometry> odometry;
  std::vector<State12> gt;
  bool has_gt = false;
  std::vector<ImuSample> imu;
  std::vector<DeliveredMeasurement> measurements;
  std::uint64_t skipped_rows = 0;
};

/// Reads run.csv (required; vio columns drive the pipeline), plus
/// measurements.csv and imu.csv when present. Throws DataError when no
/// valid rows remain or more than 1% of rows are malformed.
ReplayInput read_replay_input(const std::string& dir);

}  // namespace driftfuse
