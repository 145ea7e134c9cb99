#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "driftfuse/errors.hpp"

namespace driftfuse {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Unit quaternion. Whenever a quaternion crosses a serialization boundary
/// (CSV, C API) the component order is scalar-first: (w, x, y, z).
using Quat = Eigen::Quaterniond;

/// Wraps an angle to (-pi, pi]. Throws InvalidInputError on non-finite input.
double wrap_angle(double theta);

/// Quaternion product a*b, renormalized. Throws InvalidInputError if either
/// factor has (near-)zero norm.
Quat compose_orientation(const Quat& a, const Quat& b);

/// Inverse rotation. Throws InvalidInputError on (near-)zero norm.
Quat invert_orientation(const Quat& q);

/// Rotation matrix for intrinsic Z-Y-X (yaw-pitch-roll) Euler angles:
/// R = Rz(yaw) * Ry(pitch) * Rx(roll). This convention is used everywhere
/// in the library. Throws InvalidInputError on non-finite input.
Mat3 euler_to_rotation(double roll, double pitch, double yaw);

/// Inverse of euler_to_rotation, returning (roll, pitch, yaw) with
/// pitch in (-pi/2, pi/2). Throws DegenerateAttitudeError when |pitch| is
/// within 1e-6 of pi/2.
Vec3 euler_from_rotation(const Mat3& r);

Quat euler_to_quat(double roll, double pitch, double yaw);
Vec3 euler_from_quat(const Quat& q);

/// Rigid pose: position plus unit orientation quaternion.
struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  static Pose identity() { return {}; }
};

/// A fixed rigid transform between two frames (e.g. the VIO frame and the
/// world frame). Applying the transform and then its inverse is the identity
/// to within 1e-9.
struct StaticTransform {
  Vec3 translation = Vec3::Zero();
  Quat rotation = Quat::Identity();

  static StaticTransform identity() { return {}; }
  StaticTransform inverse() const;
};

/// Position is rotated then translated; orientation is left-composed with
/// the transform rotation.
Pose apply_static_transform(const StaticTransform& t, const Pose& pose);

}  // namespace driftfuse
