#include "driftfuse/drift_model.hpp"

#include "driftfuse/geometry.hpp"

namespace driftfuse {

void DriftModelParams::validate() const {
  if (!(dt > 0.0)) {
    throw ConfigError("drift model dt must be > 0");
  }
  for (double f : {friction_x, friction_y, friction_z, friction_yaw}) {
    if (!(f >= 0.0 && f < 1.0)) {
      throw ConfigError("drift friction must be in [0, 1)");
    }
  }
  for (double q : {process_var_x, process_var_vx, process_var_y, process_var_vy,
                   process_var_z, process_var_vz, process_var_yaw,
                   process_var_yaw_rate}) {
    if (!(q >= 0.0)) {
      throw ConfigError("drift process variance must be >= 0");
    }
  }
}

Mat8 build_transition(const DriftModelParams& params) {
  params.validate();
  Mat8 a = Mat8::Zero();
  const double frictions[4] = {params.friction_x, params.friction_y,
                               params.friction_z, params.friction_yaw};
  for (int axis = 0; axis < 4; ++axis) {
    const int i = 2 * axis;
    a(i, i) = 1.0;
    a(i, i + 1) = params.dt;
    a(i + 1, i + 1) = 1.0 - frictions[axis];
  }
  return a;
}

Mat8 build_process_noise(const DriftModelParams& params) {
  params.validate();
  Mat8 q = Mat8::Zero();
  q(drift_index::kX, drift_index::kX) = params.process_var_x;
  q(drift_index::kVx, drift_index::kVx) = params.process_var_vx;
  q(drift_index::kY, drift_index::kY) = params.process_var_y;
  q(drift_index::kVy, drift_index::kVy) = params.process_var_vy;
  q(drift_index::kZ, drift_index::kZ) = params.process_var_z;
  q(drift_index::kVz, drift_index::kVz) = params.process_var_vz;
  q(drift_index::kYaw, drift_index::kYaw) = params.process_var_yaw;
  q(drift_index::kYawRate, drift_index::kYawRate) = params.process_var_yaw_rate;
  return q;
}

Vec8 propagate(const Vec8& mean, const Mat8& transition) {
  Vec8 out = transition * mean;
  out(drift_index::kYaw) = wrap_angle(out(drift_index::kYaw));
  return out;
}

}  // namespace driftfuse
