#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "driftfuse/simulator.hpp"

namespace driftfuse {

/// Per-tick error norms for the four state groups.
struct ErrorSeries {
  std::vector<double> position;
  std::vector<double> orientation;  // norm of wrapped per-angle differences
  std::vector<double> velocity;
  std::vector<double> angular_rate;
};

struct GroupStats {
  double rmse = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double max_error = 0.0;
};

struct ErrorStats {
  GroupStats position;
  GroupStats orientation;
  GroupStats velocity;
  GroupStats angular_rate;
};

/// Componentwise error norms between an estimate series and ground truth.
/// Throws InvalidInputError on length mismatch.
ErrorSeries state_errors(std::span<const State12> estimate,
                         std::span<const State12> gt);

/// Throws InvalidInputError on an empty series.
GroupStats aggregate(std::span<const double> errors);
ErrorStats aggregate(const ErrorSeries& series);

struct RunStats {
  ErrorStats fused;
  ErrorStats vio;
};

RunStats compute_run_stats(const RunLog& log);

/// The delay x noise grid of the Monte-Carlo study. In paired mode the
/// position and yaw noise lists advance together; in product mode every
/// combination is swept.
struct SweepGrid {
  std::vector<double> delays{0.0, 0.015, 0.030, 0.060};
  std::vector<double> position_noises{0.001, 0.01, 0.1, 1.0};
  std::vector<double> yaw_noises{0.001, 0.01, 0.1, 1.0};
  int trials = 10;
  bool paired = true;

  void validate() const;
};

/// Group order used in the per-cell RMSE arrays.
enum GroupIndex : int {
  kPosition = 0,
  kOrientation = 1,
  kVelocity = 2,
  kAngularRate = 3
};

struct SweepCell {
  double delay = 0.0;
  double sigma_p = 0.0;
  double sigma_yaw = 0.0;
  std::array<double, 4> fused_rmse{};  // mean RMSE over trials, group order
  std::array<double, 4> vio_rmse{};
  std::vector<std::uint64_t> seeds;    // per-trial seeds, for reproduction
};

struct SweepResult {
  std::vector<SweepCell> cells;
  int trials = 0;
};

/// Runs trials per cell with seeds derived from (base.seed, cell, trial);
/// the result is independent of the parallel worker count.
SweepResult run_sweep(const SweepGrid& grid, const ScenarioConfig& base,
                      int parallel = 1);

}  // namespace driftfuse
