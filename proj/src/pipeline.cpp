#include "driftfuse/pipeline.hpp"

namespace driftfuse {

void PipelineParams::validate() const {
  drift_model.validate();
  measurement_noise.validate();
  imu_filter.validate();
  if (!(buffer_window > 0.0)) {
    throw ConfigError("odometry buffer window must be > 0");
  }
  if (!(imu_nominal_dt > 0.0)) {
    throw ConfigError("nominal IMU sample interval must be > 0");
  }
}

EstimatorPipeline::EstimatorPipeline(const PipelineParams& params)
    : params_(params),
      estimator_(params.drift_model, params.measurement_noise, params.gating,
                 params.initial_covariance),
      imu_filter_(params.imu_filter) {
  params_.validate();
}

WorldOdometry EstimatorPipeline::calibrate_to_world(const OdometrySample& raw) {
  OdometrySample calibrated = raw;
  if (params_.calibration_enabled) {
    if (!calibration_) {
      calibration_ = capture_calibration(raw.pose);
    }
    calibrated = apply_calibration(*calibration_, raw);
  }
  const Pose world = apply_static_transform(params_.vio_to_world, calibrated.pose);

  WorldOdometry out;
  out.t = raw.t;
  out.position = world.position;
  out.euler = euler_from_quat(world.orientation);
  out.velocity_body = calibrated.velocity_body;
  out.body_rates = calibrated.angular_velocity_body;
  return out;
}

void EstimatorPipeline::on_imu(const ImuSample& raw) {
  const double dt =
      have_imu_ ? raw.t - last_imu_t_ : params_.imu_nominal_dt;
  imu_filter_.step(raw.channels, dt > 0.0 ? dt : params_.imu_nominal_dt);
  last_imu_t_ = raw.t;
  have_imu_ = true;
}

void EstimatorPipeline::on_world_odometry(const WorldOdometry& sample) {
  estimator_.predict();
  estimator_.ingest_odometry(
      {sample.t, sample.position, sample.euler.z()});
  last_odometry_ = sample;
}

FusedState EstimatorPipeline::on_odometry(const OdometrySample& raw) {
  on_world_odometry(calibrate_to_world(raw));
  return fused();
}

MeasurementReport EstimatorPipeline::on_landmark(const LandmarkMeasurement& meas) {
  return estimator_.process_measurement(meas);
}

FusedState EstimatorPipeline::fused() const {
  if (!last_odometry_) {
    throw Error("fused state requested before any odometry sample");
  }
  return fuse(*last_odometry_, estimator_.state().mean, imu_filter_.output());
}

DriveResult drive_pipeline(EstimatorPipeline& pipeline,
                           std::span<const WorldOdometry> odometry,
                           std::span<const ImuSample> imu,
                           std::span<const DeliveredMeasurement> measurements) {
  DriveResult result;
  result.rows.reserve(odometry.size());
  result.accepted.reserve(measurements.size());

  std::size_t imu_next = 0;
  std::size_t meas_next = 0;
  for (const WorldOdometry& sample : odometry) {
    while (imu_next < imu.size() && imu[imu_next].t <= sample.t) {
      pipeline.on_imu(imu[imu_next]);
      ++imu_next;
    }
    pipeline.on_world_odometry(sample);
    while (meas_next < measurements.size() &&
           measurements[meas_next].t_delivered <= sample.t) {
      result.accepted.push_back(
          pipeline.on_landmark(measurements[meas_next].measurement).accepted());
      ++meas_next;
    }
    result.rows.push_back({sample.t, pipeline.fused(), pipeline.drift().mean});
  }
  return result;
}

}  // namespace driftfuse
