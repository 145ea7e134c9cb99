#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "driftfuse/drift_model.hpp"
#include "driftfuse/geometry.hpp"
#include "driftfuse/landmark_model.hpp"

namespace driftfuse {

/// Maps the detector confidence to a measurement variance through a
/// decreasing sigmoid: variance = amplitude / (1 + exp(steepness *
/// (confidence - midpoint))) + floor. High confidence approaches the floor,
/// low confidence approaches amplitude + floor. Defaults place the midpoint
/// below the gating threshold so every fused measurement lands on the
/// trusted branch of the sigmoid.
struct MeasurementNoiseParams {
  double amplitude = 0.2;
  double steepness = 15.0;
  double midpoint = 0.45;
  double floor = 1e-4;

  void validate() const;  // all four must be > 0
};

/// Measurements whose confidence falls below min_confidence are not fused.
struct GatingPolicy {
  double min_confidence = 0.5;
};

/// One time-stamped world-frame (x, y, z, yaw) entry of the odometry buffer.
struct BufferedPose {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;

  Vec4 as_vector() const { return {position.x(), position.y(), position.z(), yaw}; }
};

/// Keeps the most recent window (default 1 s) of odometry poses so that a
/// delayed landmark measurement can be compared against the odometry sample
/// closest to its exposure time.
class OdometryBuffer {
 public:
  explicit OdometryBuffer(double window_seconds = 1.0);

  /// Appends a sample and evicts entries older than (newest - window).
  /// A sample that does not strictly advance the newest timestamp is
  /// rejected (returns false and counts as stale).
  bool ingest(const BufferedPose& sample);

  /// The sample minimizing |t - t_query|, ties broken toward the older
  /// sample. Empty buffer or a nearest gap larger than the window yields
  /// nullopt (the measurement is dropped).
  std::optional<BufferedPose> align(double t_query) const;

  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  double window() const { return window_; }
  std::uint64_t stale_count() const { return stale_count_; }

 private:
  double window_;
  std::deque<BufferedPose> samples_;
  std::uint64_t stale_count_ = 0;
};

/// Componentwise (vio - landmark) on (x, y, z, yaw); the yaw component is
/// wrapped to (-pi, pi].
Vec4 measurement_residual(const Vec4& vio_xyzyaw, const Vec4& landmark_xyzyaw);

/// Diagonal 4x4 measurement covariance with the same confidence-driven
/// variance on every axis. Throws InvalidInputError unless confidence is
/// in [0, 1].
Mat4 confidence_to_covariance(double confidence,
                              const MeasurementNoiseParams& params);

/// Prediction step: mean = A x, P = A P A' + Q, symmetry re-enforced.
DriftState predict(const DriftState& state, const Mat8& transition,
                   const Mat8& process_noise);
DriftState predict(const DriftState& state, const DriftModelParams& params);

/// Correction step with H selecting (x, y, z, yaw) at indices (0, 2, 4, 6).
/// The innovation on the yaw axis is wrapped. Throws InvalidInputError on
/// non-finite inputs.
DriftState correct(const DriftState& state, const Vec4& measurement,
                   const Mat4& measurement_noise);

enum class MeasurementOutcome {
  kAccepted,
  kLowConfidence,   // gated out; filter state untouched
  kNoAlignedSample  // nothing in the buffer near the measurement timestamp
};

struct MeasurementReport {
  MeasurementOutcome outcome = MeasurementOutcome::kNoAlignedSample;
  double t = 0.0;
  double confidence = 0.0;
  Vec4 innovation = Vec4::Zero();
  Vec8 post_mean = Vec8::Zero();

  bool accepted() const { return outcome == MeasurementOutcome::kAccepted; }
};

/// The drift filter: prediction at the odometry rate, buffered time
/// alignment, confidence gating and adaptive measurement covariance.
/// Single-writer; call predict/ingest/process in timestamp order.
class DriftEstimator {
 public:
  DriftEstimator(const DriftModelParams& model,
                 const MeasurementNoiseParams& noise, const GatingPolicy& gating,
                 double initial_covariance = 1e-4);

  void predict();
  bool ingest_odometry(const BufferedPose& sample);
  MeasurementReport process_measurement(const LandmarkMeasurement& meas);

  const DriftState& state() const { return state_; }
  const OdometryBuffer& buffer() const { return buffer_; }
  std::uint64_t dropped_measurements() const { return dropped_; }

 private:
  DriftState state_;
  Mat8 transition_;
  Mat8 process_noise_;
  MeasurementNoiseParams noise_;
  GatingPolicy gating_;
  OdometryBuffer buffer_;
  std::uint64_t dropped_ = 0;
};

}  // namespace driftfuse
