#pragma once

#include <span>
#include <vector>

#include "driftfuse/geometry.hpp"
#include "driftfuse/landmark_model.hpp"

namespace driftfuse {

/// Ground-truth state at one instant: world position, Z-Y-X Euler attitude,
/// world-frame velocity and body-frame angular rates. Velocity and rates are
/// exact analytic derivatives of the path.
struct TrajectorySample {
  Vec3 position = Vec3::Zero();
  Vec3 euler = Vec3::Zero();
  Vec3 velocity_world = Vec3::Zero();
  Vec3 body_rates = Vec3::Zero();
};

/// Closed-loop constant-speed path through the gate centers: a periodic
/// cubic spline with yaw tangent to the horizontal velocity, pitch aligned
/// with the climb angle and zero roll.
class Trajectory {
 public:
  /// Throws ConfigError for fewer than two gates, coincident neighbours,
  /// speed outside (0, 13] m/s, or a track demanding near-vertical flight.
  Trajectory(std::span<const Gate> gates, double speed);

  double lap_length() const { return lap_length_; }
  double lap_period() const { return lap_length_ / speed_; }
  double speed() const { return speed_; }

  TrajectorySample sample(double t) const;

  /// Samples at k / rate_hz for k = 0 .. ceil(duration * rate) - 1.
  std::vector<TrajectorySample> series(double rate_hz, double duration) const;

 private:
  struct Derivatives {
    Vec3 value, first, second;  // C(u), C'(u), C''(u)
  };
  Derivatives eval(double u) const;
  double segment_length(int segment, double from, double to) const;
  double parameter_at_arc_length(double s) const;

  double speed_;
  int segment_count_;
  // Per-axis spline coefficients: position[i] + b[i]*d + c[i]*d^2 + e[i]*d^3.
  std::vector<Vec3> knots_, b_, c_, e_;
  std::vector<double> cumulative_length_;  // per segment start, plus total
  double lap_length_ = 0.0;
};

}  // namespace driftfuse
