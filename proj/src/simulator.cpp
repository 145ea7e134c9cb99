#include "driftfuse/simulator.hpp"

#include <cmath>

namespace driftfuse {

void VioSynthesisParams::validate() const {
  if (!(drift_velocity_intensity.minCoeff() >= 0.0) ||
      !(yaw_rate_intensity >= 0.0) || !(velocity_noise_stddev >= 0.0) ||
      !(attitude_noise_stddev >= 0.0)) {
    throw ConfigError("VIO synthesis parameters must be >= 0");
  }
}

void ImuSynthesisParams::validate() const {
  if (!(attitude_noise_stddev >= 0.0) || !(rate_noise_stddev >= 0.0)) {
    throw ConfigError("IMU synthesis parameters must be >= 0");
  }
}

void StreamRates::validate() const {
  if (!(vio_hz > 0.0) || !(detector_hz > 0.0) || !(imu_hz > 0.0)) {
    throw ConfigError("stream rates must be > 0");
  }
}

void ScenarioConfig::validate() const {
  if (track.size() < 2) {
    throw ConfigError("scenario track needs at least two gates");
  }
  for (const Gate& g : track) {
    g.validate();
  }
  if (laps < 0) {
    throw ConfigError("laps must be >= 0");
  }
  if (laps == 0 && !(duration > 0.0)) {
    throw ConfigError("duration must be > 0");
  }
  rates.validate();
  detector.validate();
  vio_synthesis.validate();
  imu_synthesis.validate();
  drift_model.validate();
  measurement_noise.validate();
  imu_filter.validate();
  if (!(initial_covariance >= 0.0)) {
    throw ConfigError("initial covariance must be >= 0");
  }
  if (!(buffer_window > 0.0)) {
    throw ConfigError("buffer window must be > 0");
  }
}

State12 gt_state(const TrajectorySample& s) {
  return {s.position, s.euler, s.velocity_world, s.body_rates};
}

State12 vio_world_state(const WorldOdometry& s) {
  const Mat3 r = euler_to_rotation(s.euler.x(), s.euler.y(), s.euler.z());
  return {s.position, s.euler, r * s.velocity_body, s.body_rates};
}

std::vector<OdometrySample> synth_vio(std::span<const TrajectorySample> gt,
                                      double rate_hz,
                                      const VioSynthesisParams& params,
                                      const StaticTransform& world_from_vio,
                                      Rng& rng) {
  params.validate();
  const double dt = 1.0 / rate_hz;
  const double sqrt_dt = std::sqrt(dt);
  const StaticTransform vio_from_world = world_from_vio.inverse();

  std::vector<OdometrySample> out;
  out.reserve(gt.size());

  Vec3 drift_position = Vec3::Zero();
  Vec3 drift_velocity = Vec3::Zero();
  double yaw_drift = 0.0;
  double yaw_rate_drift = 0.0;

  for (std::size_t k = 0; k < gt.size(); ++k) {
    const TrajectorySample& truth = gt[k];

    const Vec3 attitude_noise(rng.gaussian(params.attitude_noise_stddev),
                              rng.gaussian(params.attitude_noise_stddev), 0.0);
    const Vec3 euler_vio(truth.euler.x() + attitude_noise.x(),
                         truth.euler.y() + attitude_noise.y(),
                         wrap_angle(truth.euler.z() + yaw_drift));
    const Quat q_world =
        euler_to_quat(euler_vio.x(), euler_vio.y(), euler_vio.z());
    const Mat3 world_from_body =
        euler_to_rotation(euler_vio.x(), euler_vio.y(), euler_vio.z());

    // The reported velocity is the derivative of the reported position,
    // expressed in the VIO body frame.
    const Vec3 velocity_noise(rng.gaussian(params.velocity_noise_stddev),
                              rng.gaussian(params.velocity_noise_stddev),
                              rng.gaussian(params.velocity_noise_stddev));
    const Vec3 velocity_body =
        world_from_body.transpose() * (truth.velocity_world + drift_velocity) +
        velocity_noise;
    const Vec3 rates = truth.body_rates + Vec3(0.0, 0.0, yaw_rate_drift);

    OdometrySample sample;
    sample.t = static_cast<double>(k) / rate_hz;
    sample.pose = apply_static_transform(
        vio_from_world, Pose{truth.position + drift_position, q_world});
    sample.velocity_body = velocity_body;
    sample.angular_velocity_body = rates;
    out.push_back(sample);

    // Advance drift to the next tick: positions integrate the velocity
    // reported at this tick, then the velocities random-walk.
    drift_position += drift_velocity * dt;
    yaw_drift += yaw_rate_drift * dt;
    drift_velocity += sqrt_dt * Vec3(rng.gaussian(params.drift_velocity_intensity.x()),
                                     rng.gaussian(params.drift_velocity_intensity.y()),
                                     rng.gaussian(params.drift_velocity_intensity.z()));
    yaw_rate_drift += sqrt_dt * rng.gaussian(params.yaw_rate_intensity);
  }
  return out;
}

std::vector<ImuSample> synth_imu(std::span<const TrajectorySample> gt,
                                 double rate_hz,
                                 const ImuSynthesisParams& params, Rng& rng) {
  params.validate();
  std::vector<ImuSample> out;
  out.reserve(gt.size());
  for (std::size_t k = 0; k < gt.size(); ++k) {
    ImuSample s;
    s.t = static_cast<double>(k) / rate_hz;
    s.channels.roll = gt[k].euler.x() + rng.gaussian(params.attitude_noise_stddev);
    s.channels.pitch = gt[k].euler.y() + rng.gaussian(params.attitude_noise_stddev);
    s.channels.roll_rate =
        gt[k].body_rates.x() + rng.gaussian(params.rate_noise_stddev);
    s.channels.pitch_rate =
        gt[k].body_rates.y() + rng.gaussian(params.rate_noise_stddev);
    out.push_back(s);
  }
  return out;
}

RunLog run_scenario(const ScenarioConfig& config) {
  config.validate();
  const Trajectory trajectory(config.track, config.speed);
  const double duration =
      config.laps > 0 ? config.laps * trajectory.lap_period() : config.duration;

  Rng rng(config.seed);

  // The VIO frame is anchored at the vehicle's start pose; the static
  // transform restores world coordinates.
  const TrajectorySample start = trajectory.sample(0.0);
  const StaticTransform world_from_vio{
      start.position,
      euler_to_quat(start.euler.x(), start.euler.y(), start.euler.z())};

  const auto gt_vio_rate = trajectory.series(config.rates.vio_hz, duration);
  const auto gt_imu_rate = trajectory.series(config.rates.imu_hz, duration);

  const auto raw_vio = synth_vio(gt_vio_rate, config.rates.vio_hz,
                                 config.vio_synthesis, world_from_vio, rng);
  const auto imu_stream =
      synth_imu(gt_imu_rate, config.rates.imu_hz, config.imu_synthesis, rng);

  std::vector<DeliveredMeasurement> deliveries;
  if (config.detector_enabled) {
    const auto detector_ticks =
        static_cast<std::size_t>(std::ceil(duration * config.rates.detector_hz));
    for (std::size_t j = 0; j < detector_ticks; ++j) {
      const double t = static_cast<double>(j) / config.rates.detector_hz;
      const TrajectorySample truth = trajectory.sample(t);
      const Pose gt_pose{
          truth.position,
          euler_to_quat(truth.euler.x(), truth.euler.y(), truth.euler.z())};
      if (auto m = synth_measurement(gt_pose, t, config.track, config.detector,
                                     rng)) {
        deliveries.push_back({*m, t + config.detector.latency});
      }
    }
  }

  PipelineParams pipeline_params;
  pipeline_params.drift_model = config.drift_model;
  pipeline_params.measurement_noise = config.measurement_noise;
  pipeline_params.gating = config.gating;
  pipeline_params.imu_filter = config.imu_filter;
  pipeline_params.initial_covariance = config.initial_covariance;
  pipeline_params.buffer_window = config.buffer_window;
  pipeline_params.imu_nominal_dt = 1.0 / config.rates.imu_hz;
  pipeline_params.calibration_enabled = true;
  pipeline_params.vio_to_world = world_from_vio;

  EstimatorPipeline pipeline(pipeline_params);

  std::vector<WorldOdometry> world_stream;
  world_stream.reserve(raw_vio.size());
  for (const OdometrySample& raw : raw_vio) {
    world_stream.push_back(pipeline.calibrate_to_world(raw));
  }

  const DriveResult drive =
      drive_pipeline(pipeline, world_stream, imu_stream, deliveries);

  RunLog log;
  log.rows.resize(world_stream.size());
  for (std::size_t k = 0; k < world_stream.size(); ++k) {
    RunLogRow& row = log.rows[k];
    row.t = world_stream[k].t;
    row.gt = gt_state(gt_vio_rate[k]);
    row.vio = world_stream[k];
    row.fused = State12{drive.rows[k].state.position,
                        drive.rows[k].state.orientation_rpy,
                        drive.rows[k].state.velocity_world,
                        drive.rows[k].state.body_rates};
    row.drift = drive.rows[k].drift;
  }

  log.measurements.reserve(deliveries.size());
  for (std::size_t i = 0; i < deliveries.size(); ++i) {
    const DeliveredMeasurement& d = deliveries[i];
    log.measurements.push_back({d.measurement.t, d.t_delivered,
                                d.measurement.position, d.measurement.yaw,
                                d.measurement.confidence,
                                i < drive.accepted.size() && drive.accepted[i]});
  }

  log.imu.reserve(imu_stream.size());
  for (const ImuSample& s : imu_stream) {
    log.imu.push_back({s.t, s.channels});
  }
  return log;
}

}  // namespace driftfuse
