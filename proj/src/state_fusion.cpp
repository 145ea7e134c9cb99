#include "driftfuse/state_fusion.hpp"

#include <cmath>

namespace driftfuse {

Calibration capture_calibration(const Pose& raw_pose) {
  return {raw_pose.position, raw_pose.orientation.normalized()};
}

Pose apply_calibration(const Calibration& cal, const Pose& raw) {
  Pose out;
  out.position = raw.position - cal.reference_position;
  out.orientation =
      compose_orientation(invert_orientation(cal.reference_orientation),
                          raw.orientation);
  return out;
}

OdometrySample apply_calibration(const Calibration& cal,
                                 const OdometrySample& raw) {
  OdometrySample out = raw;
  out.pose = apply_calibration(cal, raw.pose);
  return out;
}

void ImuFilterParams::validate() const {
  if (!(lowpass_cutoff_hz > 0.0) || !(notch_center_hz > 0.0) ||
      !(notch_bandwidth_hz > 0.0)) {
    throw ConfigError("IMU filter frequencies must be > 0");
  }
}

LowPassFilter::LowPassFilter(double cutoff_hz) : cutoff_hz_(cutoff_hz) {}

double LowPassFilter::step(double x, double dt) {
  const double tau = 1.0 / (kTwoPi * cutoff_hz_);
  const double alpha = dt / (tau + dt);
  y_ += alpha * (x - y_);
  return y_;
}

NotchFilter::NotchFilter(double center_hz, double bandwidth_hz)
    : center_hz_(center_hz), bandwidth_hz_(bandwidth_hz) {}

void NotchFilter::design(double dt) {
  // RBJ biquad notch; quality factor from center / bandwidth.
  const double w0 = kTwoPi * center_hz_ * dt;
  const double q = center_hz_ / bandwidth_hz_;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  b0_ = 1.0 / a0;
  b1_ = -2.0 * std::cos(w0) / a0;
  b2_ = 1.0 / a0;
  a1_ = b1_;
  a2_ = (1.0 - alpha) / a0;
  dt_ = dt;
}

double NotchFilter::step(double x, double dt) {
  if (dt != dt_) {
    design(dt);
  }
  const double y = b0_ * x + b1_ * x1_ + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
  x2_ = x1_;
  x1_ = x;
  y2_ = y1_;
  y1_ = y;
  return y;
}

void NotchFilter::reset() { x1_ = x2_ = y1_ = y2_ = 0.0; }

ImuFilterBank::ImuFilterBank(const ImuFilterParams& params)
    : roll_{LowPassFilter(params.lowpass_cutoff_hz),
            NotchFilter(params.notch_center_hz, params.notch_bandwidth_hz)},
      pitch_{LowPassFilter(params.lowpass_cutoff_hz),
             NotchFilter(params.notch_center_hz, params.notch_bandwidth_hz)},
      roll_rate_{LowPassFilter(params.lowpass_cutoff_hz),
                 NotchFilter(params.notch_center_hz, params.notch_bandwidth_hz)},
      pitch_rate_{LowPassFilter(params.lowpass_cutoff_hz),
                  NotchFilter(params.notch_center_hz,
                              params.notch_bandwidth_hz)} {
  params.validate();
}

ImuChannels ImuFilterBank::step(const ImuChannels& raw, double dt) {
  if (!(dt > 0.0)) {
    throw InvalidInputError("IMU filter step requires dt > 0");
  }
  output_.roll = roll_.step(raw.roll, dt);
  output_.pitch = pitch_.step(raw.pitch, dt);
  output_.roll_rate = roll_rate_.step(raw.roll_rate, dt);
  output_.pitch_rate = pitch_rate_.step(raw.pitch_rate, dt);
  return output_;
}

FusedState fuse(const WorldOdometry& vio, const Vec8& drift_mean,
                const ImuChannels& imu_filtered) {
  const bool finite =
      vio.position.allFinite() && vio.euler.allFinite() &&
      vio.velocity_body.allFinite() && vio.body_rates.allFinite() &&
      drift_mean.allFinite() && std::isfinite(imu_filtered.roll) &&
      std::isfinite(imu_filtered.pitch) && std::isfinite(imu_filtered.roll_rate) &&
      std::isfinite(imu_filtered.pitch_rate);
  if (!finite) {
    throw InvalidInputError("non-finite input to fuse");
  }

  const Vec3 position_drift(drift_mean(drift_index::kX),
                            drift_mean(drift_index::kY),
                            drift_mean(drift_index::kZ));
  const Vec3 velocity_drift(drift_mean(drift_index::kVx),
                            drift_mean(drift_index::kVy),
                            drift_mean(drift_index::kVz));

  const Mat3 body_to_world =
      euler_to_rotation(vio.euler.x(), vio.euler.y(), vio.euler.z());

  FusedState out;
  out.position = vio.position - position_drift;
  out.orientation_rpy =
      Vec3(imu_filtered.roll, imu_filtered.pitch,
           wrap_angle(vio.euler.z() - drift_mean(drift_index::kYaw)));
  out.velocity_world = body_to_world * vio.velocity_body - velocity_drift;
  out.body_rates =
      Vec3(imu_filtered.roll_rate, imu_filtered.pitch_rate,
           vio.body_rates.z() - drift_mean(drift_index::kYawRate));
  return out;
}

}  // namespace driftfuse
