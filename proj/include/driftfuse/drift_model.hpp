#pragma once

#include <Eigen/Dense>

#include "driftfuse/errors.hpp"

namespace driftfuse {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

/// Index layout of the drift state vector:
/// (x, vx, y, vy, z, vz, yaw, yaw_rate).
namespace drift_index {
inline constexpr int kX = 0;
inline constexpr int kVx = 1;
inline constexpr int kY = 2;
inline constexpr int kVy = 3;
inline constexpr int kZ = 4;
inline constexpr int kVz = 5;
inline constexpr int kYaw = 6;
inline constexpr int kYawRate = 7;
}  // namespace drift_index

/// Drift mean and covariance. The covariance is kept symmetric to within
/// 1e-9 and positive semi-definite; the yaw component of the mean is stored
/// wrapped to (-pi, pi].
struct DriftState {
  Vec8 mean = Vec8::Zero();
  Mat8 covariance = Mat8::Zero();
};

/// Parameters of the discrete drift system. Frictions are per-step
/// multiplicative decays in [0, 1) applied to the drift velocities; for a
/// small per-step friction f at step dt the per-second equivalent is
/// approximately f / dt. Process variances are per-step and expressed in
/// squared state units; the velocity/rate defaults correspond to drift
/// velocities wandering at roughly 0.05 m/s (0.01 rad/s) per sqrt(s) at
/// 100 Hz.
struct DriftModelParams {
  double dt = 0.01;

  double friction_x = 0.01;
  double friction_y = 0.01;
  double friction_z = 0.01;
  double friction_yaw = 0.01;

  double process_var_x = 1e-8;
  double process_var_vx = 1e-5;
  double process_var_y = 1e-8;
  double process_var_vy = 1e-5;
  double process_var_z = 1e-8;
  double process_var_vz = 1e-5;
  double process_var_yaw = 1e-8;
  double process_var_yaw_rate = 7e-7;

  /// Throws ConfigError unless dt > 0, every friction is in [0, 1) and
  /// every variance is >= 0.
  void validate() const;
};

/// Block-diagonal state transition: one [[1, dt], [0, 1-f]] block per axis
/// (x, y, z, yaw); every cross-axis entry is zero.
Mat8 build_transition(const DriftModelParams& params);

/// Diagonal process noise in state order: position/yaw variances at indices
/// 0, 2, 4, 6 and velocity/rate variances at 1, 3, 5, 7.
Mat8 build_process_noise(const DriftModelParams& params);

/// Free mean propagation (no covariance): A * mean, with the yaw component
/// re-wrapped to (-pi, pi].
Vec8 propagate(const Vec8& mean, const Mat8& transition);

}  // namespace driftfuse
