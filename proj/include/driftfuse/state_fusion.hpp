#pragma once

#include "driftfuse/drift_model.hpp"
#include "driftfuse/geometry.hpp"

namespace driftfuse {

/// One raw VIO output: pose in the VIO frame, body-frame linear and angular
/// velocity.
struct OdometrySample {
  double t = 0.0;
  Pose pose;
  Vec3 velocity_body = Vec3::Zero();
  Vec3 angular_velocity_body = Vec3::Zero();
};

/// Reference pose captured once per flight while the vehicle sits level on
/// the starting podium; applying it re-zeroes the odometry stream.
struct Calibration {
  Vec3 reference_position = Vec3::Zero();
  Quat reference_orientation = Quat::Identity();
};

Calibration capture_calibration(const Pose& raw_pose);

/// Subtracts the reference position and left-composes the inverse reference
/// orientation. Body-frame velocities pass through unchanged.
Pose apply_calibration(const Calibration& cal, const Pose& raw);
OdometrySample apply_calibration(const Calibration& cal,
                                 const OdometrySample& raw);

struct ImuFilterParams {
  double lowpass_cutoff_hz = 30.0;
  double notch_center_hz = 80.0;
  double notch_bandwidth_hz = 20.0;

  void validate() const;
};

/// First-order low-pass, unit DC gain.
class LowPassFilter {
 public:
  explicit LowPassFilter(double cutoff_hz);
  double step(double x, double dt);
  void reset() { y_ = 0.0; }

 private:
  double cutoff_hz_;
  double y_ = 0.0;
};

/// Second-order biquad notch, unit DC gain. Coefficients are recomputed
/// when the sample interval changes.
class NotchFilter {
 public:
  NotchFilter(double center_hz, double bandwidth_hz);
  double step(double x, double dt);
  void reset();

 private:
  void design(double dt);

  double center_hz_;
  double bandwidth_hz_;
  double dt_ = 0.0;
  double b0_ = 1.0, b1_ = 0.0, b2_ = 0.0, a1_ = 0.0, a2_ = 0.0;
  double x1_ = 0.0, x2_ = 0.0, y1_ = 0.0, y2_ = 0.0;
};

/// The four IMU channels the fusion consumes.
struct ImuChannels {
  double roll = 0.0;
  double pitch = 0.0;
  double roll_rate = 0.0;
  double pitch_rate = 0.0;
};

/// One time-stamped raw IMU sample.
struct ImuSample {
  double t = 0.0;
  ImuChannels channels;
};

/// Low-pass + notch cascade applied per channel to roll, pitch and the
/// corresponding body rates.
class ImuFilterBank {
 public:
  explicit ImuFilterBank(const ImuFilterParams& params);
  ImuChannels step(const ImuChannels& raw, double dt);
  const ImuChannels& output() const { return output_; }

 private:
  struct Channel {
    LowPassFilter lowpass;
    NotchFilter notch;
    double step(double x, double dt) { return notch.step(lowpass.step(x, dt), dt); }
  };
  Channel roll_, pitch_, roll_rate_, pitch_rate_;
  ImuChannels output_;
};

/// Calibrated VIO odometry expressed in the world frame: position, Z-Y-X
/// Euler attitude, body-frame linear velocity and body rates. This is the
/// canonical estimator input; it serializes losslessly to the run log.
struct WorldOdometry {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 euler = Vec3::Zero();  // (roll, pitch, yaw)
  Vec3 velocity_body = Vec3::Zero();
  Vec3 body_rates = Vec3::Zero();
};

/// The corrected 12-component vehicle state.
struct FusedState {
  Vec3 position = Vec3::Zero();          // world, m
  Vec3 orientation_rpy = Vec3::Zero();   // (roll, pitch, yaw), rad
  Vec3 velocity_world = Vec3::Zero();    // m/s
  Vec3 body_rates = Vec3::Zero();        // (p, q, r), rad/s
};

/// Full-state correction:
///   position  = vio position - position drift
///   attitude  = (imu roll, imu pitch, wrap(vio yaw - yaw drift))
///   velocity  = R(vio attitude) * body velocity - drift velocity
///   rates     = (imu p, imu q, vio r - yaw-rate drift)
/// Throws InvalidInputError on non-finite input.
FusedState fuse(const WorldOdometry& vio, const Vec8& drift_mean,
                const ImuChannels& imu_filtered);

}  // namespace driftfuse
