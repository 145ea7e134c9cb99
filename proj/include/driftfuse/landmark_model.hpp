#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftfuse/geometry.hpp"
#include "driftfuse/rng.hpp"

namespace driftfuse {

/// A square racing gate standing upright. The opening lies in the plane
/// whose normal is Rz(yaw) * x; the detector keys on the four corners of
/// the inner opening.
struct Gate {
  Vec3 center = Vec3::Zero();
  double yaw = 0.0;
  double inner_size = 1.5;
  double outer_size = 2.7;

  void validate() const;
};

/// One world-frame pose fix produced by the landmark detector.
struct LandmarkMeasurement {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  double confidence = 0.0;  // in [0, 1]
};

/// Parametric model of the detector: Gaussian pose noise, fixed latency,
/// a camera frustum, and a distance-driven reprojection-error model that
/// feeds the confidence score.
struct DetectorModel {
  double position_stddev = 0.01;    // m, per axis
  double yaw_stddev = 0.01;         // rad
  double latency = 0.0;             // s between exposure and delivery
  double rate_hz = 30.0;
  double visibility_range = 25.0;   // m
  double fov_half_angle = kPi / 2;  // rad, measured from the body x axis
  double base_reprojection_error = 0.02;
  double reprojection_error_per_meter = 0.01;

  void validate() const;
};

/// Confidence score from the reprojection error and the number of corners
/// used: exp(-e^2 / (2 * 0.15^2)) * (1 - exp(-0.4 * n)). Result is in
/// [0, 1), decreasing in the error and increasing in the corner count.
/// Throws InvalidInputError on negative inputs.
double reprojection_confidence(double reprojection_error, int corner_count);

/// Corners of the gate's inner opening, in the world frame.
std::array<Vec3, 4> gate_corners(const Gate& gate);

/// Number of corners of the nearest visible gate that fall inside the
/// camera frustum (forward axis = body x) and within visibility range.
/// Returns 0 when no gate is visible.
int visible_corners(const Pose& vehicle, std::span<const Gate> gates,
                    const DetectorModel& model);

/// Synthesizes one detector output at time t, or nothing when no gate is
/// visible. The measurement is the ground-truth (x, y, z, yaw) plus
/// independent zero-mean Gaussian noise; it is stamped t and becomes
/// observable at t + latency.
std::optional<LandmarkMeasurement> synth_measurement(
    const Pose& gt_pose, double t, std::span<const Gate> gates,
    const DetectorModel& model, Rng& rng);

/// Loads a track file: one gate per line as `x y z yaw inner outer`,
/// '#' starts a comment. Throws ConfigError on parse failure.
std::vector<Gate> load_track(const std::string& path);

}  // namespace driftfuse
