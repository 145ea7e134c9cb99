#include "driftfuse/drift_estimator.hpp"

#include <cmath>

namespace driftfuse {

namespace {
constexpr int kMeasuredIndices[4] = {drift_index::kX, drift_index::kY,
                                     drift_index::kZ, drift_index::kYaw};

void symmetrize(Mat8& p) { p = ((p + p.transpose()) / 2.0).eval(); }
}  // namespace

void MeasurementNoiseParams::validate() const {
  for (double v : {amplitude, steepness, midpoint, floor}) {
    if (!(v > 0.0)) {
      throw ConfigError("measurement noise map parameters must be > 0");
    }
  }
}

OdometryBuffer::OdometryBuffer(double window_seconds)
    : window_(window_seconds) {
  if (!(window_ > 0.0)) {
    throw ConfigError("odometry buffer window must be > 0");
  }
}

bool OdometryBuffer::ingest(const BufferedPose& sample) {
  if (!samples_.empty() && sample.t <= samples_.back().t) {
    ++stale_count_;
    return false;
  }
  samples_.push_back(sample);
  const double horizon = samples_.back().t - window_;
  while (samples_.front().t < horizon) {
    samples_.pop_front();
  }
  return true;
}

std::optional<BufferedPose> OdometryBuffer::align(double t_query) const {
  if (samples_.empty()) {
    return std::nullopt;
  }
  auto newer = std::lower_bound(
      samples_.begin(), samples_.end(), t_query,
      [](const BufferedPose& s, double t) { return s.t < t; });
  const BufferedPose* best = nullptr;
  if (newer == samples_.end()) {
    best = &samples_.back();
  } else if (newer == samples_.begin()) {
    best = &*newer;
  } else {
    const BufferedPose& older = *std::prev(newer);
    // Tie goes to the older sample: camera latency means the true exposure
    // predates the measurement arrival.
    best = (t_query - older.t) <= (newer->t - t_query) ? &older : &*newer;
  }
  if (std::abs(best->t - t_query) > window_) {
    return std::nullopt;
  }
  return *best;
}

Vec4 measurement_residual(const Vec4& vio_xyzyaw, const Vec4& landmark_xyzyaw) {
  Vec4 z = vio_xyzyaw - landmark_xyzyaw;
  z(3) = wrap_angle(z(3));
  return z;
}

Mat4 confidence_to_covariance(double confidence,
                              const MeasurementNoiseParams& params) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw InvalidInputError("confidence must be in [0, 1]");
  }
  params.validate();
  const double variance =
      params.amplitude /
          (1.0 + std::exp(params.steepness * (confidence - params.midpoint))) +
      params.floor;
  return variance * Mat4::Identity();
}

DriftState predict(const DriftState& state, const Mat8& transition,
                   const Mat8& process_noise) {
  DriftState out;
  out.mean = propagate(state.mean, transition);
  out.covariance =
      transition * state.covariance * transition.transpose() + process_noise;
  symmetrize(out.covariance);
  return out;
}

DriftState predict(const DriftState& state, const DriftModelParams& params) {
  return predict(state, build_transition(params), build_process_noise(params));
}

DriftState correct(const DriftState& state, const Vec4& measurement,
                   const Mat4& measurement_noise) {
  if (!measurement.allFinite() || !measurement_noise.allFinite() ||
      !state.mean.allFinite() || !state.covariance.allFinite()) {
    throw InvalidInputError("non-finite input to correction step");
  }

  // H picks rows (0, 2, 4, 6); work with those slices directly.
  Eigen::Matrix<double, 4, 8> h = Eigen::Matrix<double, 4, 8>::Zero();
  for (int i = 0; i < 4; ++i) {
    h(i, kMeasuredIndices[i]) = 1.0;
  }

  const Mat4 innovation_cov =
      h * state.covariance * h.transpose() + measurement_noise;
  const Eigen::Matrix<double, 8, 4> gain =
      state.covariance * h.transpose() * innovation_cov.inverse();

  Vec4 innovation = measurement - h * state.mean;
  innovation(3) = wrap_angle(innovation(3));

  DriftState out;
  out.mean = state.mean + gain * innovation;
  out.mean(drift_index::kYaw) = wrap_angle(out.mean(drift_index::kYaw));
  out.covariance = state.covariance - gain * h * state.covariance;
  symmetrize(out.covariance);
  return out;
}

DriftEstimator::DriftEstimator(const DriftModelParams& model,
                               const MeasurementNoiseParams& noise,
                               const GatingPolicy& gating,
                               double initial_covariance)
    : transition_(build_transition(model)),
      process_noise_(build_process_noise(model)),
      noise_(noise),
      gating_(gating) {
  noise_.validate();
  if (!(gating_.min_confidence >= 0.0 && gating_.min_confidence <= 1.0)) {
    throw ConfigError("gating threshold must be in [0, 1]");
  }
  if (!(initial_covariance >= 0.0)) {
    throw ConfigError("initial covariance must be >= 0");
  }
  state_.covariance = initial_covariance * Mat8::Identity();
}

void DriftEstimator::predict() {
  state_ = driftfuse::predict(state_, transition_, process_noise_);
}

bool DriftEstimator::ingest_odometry(const BufferedPose& sample) {
  return buffer_.ingest(sample);
}

MeasurementReport DriftEstimator::process_measurement(
    const LandmarkMeasurement& meas) {
  MeasurementReport report;
  report.t = meas.t;
  report.confidence = meas.confidence;
  report.post_mean = state_.mean;

  if (meas.confidence < gating_.min_confidence) {
    report.outcome = MeasurementOutcome::kLowConfidence;
    return report;
  }
  const auto aligned = buffer_.align(meas.t);
  if (!aligned) {
    ++dropped_;
    report.outcome = MeasurementOutcome::kNoAlignedSample;
    return report;
  }

  const Vec4 landmark(meas.position.x(), meas.position.y(), meas.position.z(),
                      meas.yaw);
  const Vec4 residual = measurement_residual(aligned->as_vector(), landmark);
  const Mat4 noise = confidence_to_covariance(meas.confidence, noise_);

  report.innovation = residual - Vec4(state_.mean(drift_index::kX),
                                      state_.mean(drift_index::kY),
                                      state_.mean(drift_index::kZ),
                                      state_.mean(drift_index::kYaw));
  report.innovation(3) = wrap_angle(report.innovation(3));

  state_ = correct(state_, residual, noise);
  report.post_mean = state_.mean;
  report.outcome = MeasurementOutcome::kAccepted;
  return report;
}

}  // namespace driftfuse
