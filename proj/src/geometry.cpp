#include "driftfuse/geometry.hpp"

#include <cmath>

namespace driftfuse {

namespace {
constexpr double kQuatNormEps = 1e-12;
constexpr double kGimbalEps = 1e-6;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw InvalidInputError(std::string("non-finite ") + what);
  }
}

Quat normalized_or_throw(const Quat& q) {
  const double n = q.norm();
  if (n < kQuatNormEps) {
    throw InvalidInputError("zero-norm quaternion");
  }
  return Quat(q.w() / n, q.x() / n, q.y() / n, q.z() / n);
}
}  // namespace

double wrap_angle(double theta) {
  require_finite(theta, "angle");
  double w = std::remainder(theta, kTwoPi);
  if (w <= -kPi) {
    w += kTwoPi;  // map -pi onto the closed +pi side
  }
  return w;
}

Quat compose_orientation(const Quat& a, const Quat& b) {
  const Quat an = normalized_or_throw(a);
  const Quat bn = normalized_or_throw(b);
  Quat out = an * bn;
  out.normalize();
  return out;
}

Quat invert_orientation(const Quat& q) {
  return normalized_or_throw(q).conjugate();
}

Mat3 euler_to_rotation(double roll, double pitch, double yaw) {
  require_finite(roll, "roll");
  require_finite(pitch, "pitch");
  require_finite(yaw, "yaw");
  return (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
          Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
          Eigen::AngleAxisd(roll, Vec3::UnitX()))
      .toRotationMatrix();
}

Vec3 euler_from_rotation(const Mat3& r) {
  // R(2,0) = -sin(pitch) for the Z-Y-X convention.
  const double sp = -r(2, 0);
  const double pitch = std::asin(std::clamp(sp, -1.0, 1.0));
  if (kPi / 2.0 - std::abs(pitch) < kGimbalEps) {
    throw DegenerateAttitudeError("pitch within 1e-6 of +-pi/2");
  }
  const double roll = std::atan2(r(2, 1), r(2, 2));
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return {roll, pitch, yaw};
}

Quat euler_to_quat(double roll, double pitch, double yaw) {
  return Quat(euler_to_rotation(roll, pitch, yaw));
}

Vec3 euler_from_quat(const Quat& q) {
  return euler_from_rotation(normalized_or_throw(q).toRotationMatrix());
}

StaticTransform StaticTransform::inverse() const {
  const Quat rinv = invert_orientation(rotation);
  return {Vec3(-(rinv * translation)), rinv};
}

Pose apply_static_transform(const StaticTransform& t, const Pose& pose) {
  Pose out;
  out.position = t.rotation * pose.position + t.translation;
  out.orientation = compose_orientation(t.rotation, pose.orientation);
  return out;
}

}  // namespace driftfuse
