#pragma once

#include <optional>
#include <span>
#include <vector>

#include "driftfuse/drift_estimator.hpp"
#include "driftfuse/state_fusion.hpp"

namespace driftfuse {

struct PipelineParams {
  DriftModelParams drift_model;
  MeasurementNoiseParams measurement_noise;
  GatingPolicy gating;
  ImuFilterParams imu_filter;
  double initial_covariance = 1e-4;
  double buffer_window = 1.0;
  double imu_nominal_dt = 1.0 / 400.0;  // used for the first IMU sample
  bool calibration_enabled = true;
  StaticTransform vio_to_world;

  void validate() const;
};

/// The full estimator: calibration, VIO-to-world transform, drift filter,
/// IMU filtering and state fusion. Single-writer; feed samples in
/// timestamp order (at equal timestamps: IMU, odometry, then landmarks).
class EstimatorPipeline {
 public:
  explicit EstimatorPipeline(const PipelineParams& params);

  /// Applies calibration (capturing the reference from the first sample
  /// when enabled) and the static transform, and extracts Euler attitude.
  WorldOdometry calibrate_to_world(const OdometrySample& raw);

  void on_imu(const ImuSample& raw);

  /// Prediction step plus buffer ingestion for one odometry tick.
  void on_world_odometry(const WorldOdometry& sample);

  /// Convenience for streaming use: calibrate, ingest, and return the
  /// fused state for this tick.
  FusedState on_odometry(const OdometrySample& raw);

  MeasurementReport on_landmark(const LandmarkMeasurement& meas);

  /// Fused state for the most recent odometry tick. Throws Error before
  /// the first odometry sample.
  FusedState fused() const;

  const DriftState& drift() const { return estimator_.state(); }
  const ImuChannels& imu_filtered() const { return imu_filter_.output(); }
  const DriftEstimator& estimator() const { return estimator_; }

 private:
  PipelineParams params_;
  DriftEstimator estimator_;
  ImuFilterBank imu_filter_;
  std::optional<Calibration> calibration_;
  std::optional<WorldOdometry> last_odometry_;
  double last_imu_t_ = 0.0;
  bool have_imu_ = false;
};

/// A landmark measurement together with the time it becomes observable
/// (exposure timestamp plus detector latency).
struct DeliveredMeasurement {
  LandmarkMeasurement measurement;
  double t_delivered = 0.0;
};

struct FusedRow {
  double t = 0.0;
  FusedState state;
  Vec8 drift = Vec8::Zero();
};

struct DriveResult {
  std::vector<FusedRow> rows;       // one per odometry tick
  std::vector<bool> accepted;       // per delivered measurement, input order
};

/// Replays time-ordered streams through a pipeline: at each odometry tick,
/// IMU samples up to the tick are filtered first, then the odometry is
/// ingested, then every measurement due by the tick is processed, and the
/// fused state is recorded. Simulation and log replay share this loop.
DriveResult drive_pipeline(EstimatorPipeline& pipeline,
                           std::span<const WorldOdometry> odometry,
                           std::span<const ImuSample> imu,
                           std::span<const DeliveredMeasurement> measurements);

}  // namespace driftfuse
