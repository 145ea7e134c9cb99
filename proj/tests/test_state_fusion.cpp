#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "driftfuse/state_fusion.hpp"

using namespace driftfuse;

TEST_CASE("calibration capture then apply") {
  SUBCASE("apply at the capture pose zeroes everything") {
    const Pose raw{Vec3(1.2, -0.7, 0.4), euler_to_quat(0.05, -0.02, 1.1)};
    const Calibration cal = capture_calibration(raw);
    const Pose out = apply_calibration(cal, raw);
    CHECK(out.position.norm() < 1e-12);
    CHECK(out.orientation.angularDistance(Quat::Identity()) < 1e-12);
  }

  SUBCASE("identity capture is the identity map") {
    const Calibration cal = capture_calibration(Pose{});
    const Pose raw{Vec3(3, 4, 5), euler_to_quat(0.1, 0.2, 0.3)};
    const Pose out = apply_calibration(cal, raw);
    CHECK((out.position - raw.position).norm() < 1e-15);
    CHECK(out.orientation.angularDistance(raw.orientation) < 1e-15);
  }

  SUBCASE("relative yaw survives") {
    const Calibration cal =
        capture_calibration(Pose{Vec3::Zero(), euler_to_quat(0, 0, kPi / 6)});
    const Pose out = apply_calibration(
        cal, Pose{Vec3::Zero(), euler_to_quat(0, 0, 5 * kPi / 18)});
    CHECK(euler_from_quat(out.orientation).z() ==
          doctest::Approx(kPi / 9).epsilon(1e-9));  // 50 - 30 = 20 degrees
  }

  SUBCASE("position offset subtracts") {
    const Calibration cal = capture_calibration(Pose{Vec3(1, 1, 1), Quat::Identity()});
    CHECK(apply_calibration(cal, Pose{Vec3(1, 1, 1), Quat::Identity()})
              .position.norm() < 1e-15);
  }

  SUBCASE("random pair matches the composition oracle") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    std::uniform_real_distribution<double> pitch(-1.4, 1.4);
    for (int trial = 0; trial < 200; ++trial) {
      const Quat ref = euler_to_quat(angle(rng), pitch(rng), angle(rng));
      const Quat raw = euler_to_quat(angle(rng), pitch(rng), angle(rng));
      const Calibration cal = capture_calibration(Pose{Vec3::Zero(), ref});
      const Pose out = apply_calibration(cal, Pose{Vec3::Zero(), raw});
      const Quat expected = compose_orientation(invert_orientation(ref), raw);
      CHECK(out.orientation.angularDistance(expected) < 1e-12);
    }
  }

  SUBCASE("body velocities pass through") {
    OdometrySample s;
    s.pose = {Vec3(5, 5, 5), euler_to_quat(0, 0, 1.0)};
    s.velocity_body = Vec3(1, 2, 3);
    s.angular_velocity_body = Vec3(0.1, 0.2, 0.3);
    const Calibration cal = capture_calibration(s.pose);
    const OdometrySample out = apply_calibration(cal, s);
    CHECK(out.velocity_body == s.velocity_body);
    CHECK(out.angular_velocity_body == s.angular_velocity_body);
  }
}

TEST_CASE("imu filter cascade") {
  const ImuFilterParams params;  // 30 Hz low-pass, 80 Hz notch, 20 Hz width
  const double dt = 1.0 / 400.0;

  SUBCASE("unit DC gain") {
    ImuFilterBank bank(params);
    ImuChannels raw{0.3, -0.2, 1.0, -1.0};
    ImuChannels out;
    for (int k = 0; k < 1000; ++k) {
      out = bank.step(raw, dt);
    }
    CHECK(out.roll == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(out.pitch == doctest::Approx(-0.2).epsilon(1e-6));
    CHECK(out.roll_rate == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(out.pitch_rate == doctest::Approx(-1.0).epsilon(1e-6));
  }

  SUBCASE("zero input gives zero output") {
    ImuFilterBank bank(params);
    for (int k = 0; k < 100; ++k) {
      const ImuChannels out = bank.step(ImuChannels{}, dt);
      CHECK(out.roll == 0.0);
      CHECK(out.pitch_rate == 0.0);
    }
  }

  SUBCASE("notch attenuates its center by 20 dB or more") {
    ImuFilterBank bank(params);
    const double amplitude = 1.0;
    double peak = 0.0;
    for (int k = 0; k < 4000; ++k) {
      const double x =
          amplitude * std::sin(kTwoPi * params.notch_center_hz * k * dt);
      const ImuChannels out = bank.step({x, 0, 0, 0}, dt);
      if (k >= 2000) {  // past the transient
        peak = std::max(peak, std::abs(out.roll));
      }
    }
    CHECK(peak <= amplitude * 0.1);  // -20 dB
  }

  SUBCASE("sine well below the cutoff passes with little loss") {
    ImuFilterBank bank(params);
    double peak = 0.0;
    for (int k = 0; k < 4000; ++k) {
      const double x = std::sin(kTwoPi * 2.0 * k * dt);
      const ImuChannels out = bank.step({x, 0, 0, 0}, dt);
      if (k >= 2000) {
        peak = std::max(peak, std::abs(out.roll));
      }
    }
    CHECK(peak > 0.95);
  }
}

namespace {
WorldOdometry sample_at_yaw(double yaw) {
  WorldOdometry vio;
  vio.t = 1.0;
  vio.position = Vec3(5, 5, 5);
  vio.euler = Vec3(0, 0, yaw);
  vio.velocity_body = Vec3(1, 0, 0);
  vio.body_rates = Vec3(0.0, 0.0, 0.4);
  return vio;
}
}  // namespace

TEST_CASE("fuse") {
  SUBCASE("zero drift is a pass-through") {
    const WorldOdometry vio = sample_at_yaw(0.3);
    const ImuChannels imu{0.01, -0.02, 0.1, 0.2};
    const FusedState out = fuse(vio, Vec8::Zero(), imu);
    CHECK((out.position - vio.position).norm() == 0.0);
    CHECK(out.orientation_rpy.x() == imu.roll);
    CHECK(out.orientation_rpy.y() == imu.pitch);
    CHECK(out.orientation_rpy.z() == doctest::Approx(0.3));
    const Vec3 expected_velocity =
        euler_to_rotation(0, 0, 0.3) * vio.velocity_body;
    CHECK((out.velocity_world - expected_velocity).norm() < 1e-15);
    CHECK(out.body_rates.x() == imu.roll_rate);
    CHECK(out.body_rates.y() == imu.pitch_rate);
    CHECK(out.body_rates.z() == doctest::Approx(0.4));
  }

  SUBCASE("position drift subtracts") {
    Vec8 drift = Vec8::Zero();
    drift(drift_index::kX) = 1.0;
    const FusedState out = fuse(sample_at_yaw(0), drift, ImuChannels{});
    CHECK((out.position - Vec3(4, 5, 5)).norm() < 1e-15);
  }

  SUBCASE("yaw drift subtracts") {
    Vec8 drift = Vec8::Zero();
    drift(drift_index::kYaw) = 0.1;
    const FusedState out = fuse(sample_at_yaw(0.1), drift, ImuChannels{});
    CHECK(out.orientation_rpy.z() == doctest::Approx(0.0));
  }

  SUBCASE("body velocity rotates through the VIO yaw") {
    const FusedState out = fuse(sample_at_yaw(kPi / 2), Vec8::Zero(), ImuChannels{});
    CHECK(out.velocity_world.x() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.velocity_world.y() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("perfect drift estimate cancels synthetic drift exactly") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> small(-0.5, 0.5);
    for (int trial = 0; trial < 200; ++trial) {
      const Vec3 gt_position(small(rng) * 10, small(rng) * 10, small(rng) * 4);
      const Vec3 gt_velocity(small(rng) * 8, small(rng) * 8, small(rng) * 2);
      const double gt_yaw = small(rng) * 3;
      const double gt_r = small(rng);

      Vec8 drift;
      drift << small(rng), small(rng), small(rng), small(rng), small(rng),
          small(rng), small(rng) * 2, small(rng);

      WorldOdometry vio;
      vio.position =
          gt_position + Vec3(drift(0), drift(2), drift(4));
      vio.euler = Vec3(0, 0, wrap_angle(gt_yaw + drift(6)));
      const Mat3 r_vio = euler_to_rotation(0, 0, vio.euler.z());
      vio.velocity_body =
          r_vio.transpose() * (gt_velocity + Vec3(drift(1), drift(3), drift(5)));
      vio.body_rates = Vec3(0, 0, gt_r + drift(7));

      const FusedState out = fuse(vio, drift, ImuChannels{});
      CHECK((out.position - gt_position).norm() < 1e-9);
      CHECK(wrap_angle(out.orientation_rpy.z() - gt_yaw) < 1e-9);
      CHECK((out.velocity_world - gt_velocity).norm() < 1e-9);
      CHECK(out.body_rates.z() == doctest::Approx(gt_r).epsilon(1e-9));
    }
  }

  SUBCASE("yaw subtraction is stable under 2*pi shifts") {
    Vec8 drift = Vec8::Zero();
    drift(drift_index::kYaw) = 0.4;
    const FusedState a = fuse(sample_at_yaw(0.9), drift, ImuChannels{});
    const FusedState b =
        fuse(sample_at_yaw(wrap_angle(0.9 + kTwoPi)), drift, ImuChannels{});
    CHECK(a.orientation_rpy.z() == doctest::Approx(b.orientation_rpy.z()));
  }

  SUBCASE("non-finite input is rejected") {
    WorldOdometry vio = sample_at_yaw(0);
    vio.position.x() = std::nan("");
    CHECK_THROWS_AS(fuse(vio, Vec8::Zero(), ImuChannels{}), InvalidInputError);
  }
}
