#pragma once

#include <cstdint>
#include <vector>

#include "driftfuse/pipeline.hpp"
#include "driftfuse/trajectory.hpp"

namespace driftfuse {

/// Synthetic VIO error model: drift velocities evolve as friction-free
/// random walks (deliberately not the estimator's friction model), drift
/// positions integrate them, and white noise corrupts the reported
/// velocity and attitude.
struct VioSynthesisParams {
  Vec3 drift_velocity_intensity = Vec3(0.05, 0.05, 0.05);  // m/s per sqrt(s)
  double yaw_rate_intensity = 0.01;     // rad/s per sqrt(s)
  double velocity_noise_stddev = 0.05;  // m/s
  double attitude_noise_stddev = 0.01;  // rad, roll/pitch

  void validate() const;
};

struct ImuSynthesisParams {
  double attitude_noise_stddev = 0.005;  // rad
  double rate_noise_stddev = 0.01;       // rad/s

  void validate() const;
};

struct StreamRates {
  double vio_hz = 100.0;
  double detector_hz = 30.0;
  double imu_hz = 400.0;

  void validate() const;
};

/// Everything that defines one simulation run; a given config (seed
/// included) always produces the same RunLog.
struct ScenarioConfig {
  std::vector<Gate> track;
  double speed = 8.0;   // m/s along the track
  int laps = 0;         // when > 0, overrides duration with laps * lap period
  double duration = 60.0;
  StreamRates rates;
  bool detector_enabled = true;
  DetectorModel detector;
  VioSynthesisParams vio_synthesis;
  ImuSynthesisParams imu_synthesis;
  DriftModelParams drift_model;
  MeasurementNoiseParams measurement_noise;
  GatingPolicy gating;
  ImuFilterParams imu_filter;
  double initial_covariance = 1e-4;
  double buffer_window = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// A 12-component vehicle state snapshot: world position, Z-Y-X Euler
/// attitude, world-frame velocity, body rates.
struct State12 {
  Vec3 position = Vec3::Zero();
  Vec3 euler = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 rates = Vec3::Zero();
};

struct RunLogRow {
  double t = 0.0;
  State12 gt;
  WorldOdometry vio;  // world pose, body-frame velocities as VIO reports them
  State12 fused;
  Vec8 drift = Vec8::Zero();
};

struct MeasurementRecord {
  double t_meas = 0.0;
  double t_delivered = 0.0;
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  double confidence = 0.0;
  bool accepted = false;
};

struct ImuRecord {
  double t = 0.0;
  ImuChannels channels;
};

struct RunLog {
  std::vector<RunLogRow> rows;                  // one per VIO tick
  std::vector<MeasurementRecord> measurements;  // emitted detector outputs
  std::vector<ImuRecord> imu;                   // raw IMU stream
};

State12 gt_state(const TrajectorySample& s);

/// World-frame view of a VIO sample: rotates the body velocity with the
/// VIO attitude so it is comparable against ground truth.
State12 vio_world_state(const WorldOdometry& s);

/// Raw VIO stream at the given rate, expressed in the VIO frame defined by
/// world_from_vio (the vehicle's start pose). Zero intensities reproduce
/// ground truth exactly.
std::vector<OdometrySample> synth_vio(std::span<const TrajectorySample> gt,
                                      double rate_hz,
                                      const VioSynthesisParams& params,
                                      const StaticTransform& world_from_vio,
                                      Rng& rng);

/// Raw IMU stream: ground-truth roll/pitch and p/q plus white noise.
std::vector<ImuSample> synth_imu(std::span<const TrajectorySample> gt,
                                 double rate_hz,
                                 const ImuSynthesisParams& params, Rng& rng);

RunLog run_scenario(const ScenarioConfig& config);

}  // namespace driftfuse
