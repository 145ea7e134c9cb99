#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "driftfuse/evaluation.hpp"
#include "driftfuse/simulator.hpp"

using namespace driftfuse;

namespace {

std::vector<Gate> flat_square_track() {
  std::vector<Gate> gates;
  gates.push_back({Vec3(15, 0, 3), 0, 1.5, 2.7});
  gates.push_back({Vec3(0, 12, 3), 0, 1.5, 2.7});
  gates.push_back({Vec3(-15, 0, 3), 0, 1.5, 2.7});
  gates.push_back({Vec3(0, -12, 3), 0, 1.5, 2.7});
  return gates;
}

ScenarioConfig small_scenario() {
  ScenarioConfig config;
  config.track = flat_square_track();
  config.speed = 6.0;
  config.duration = 10.0;
  config.seed = 42;
  return config;
}

ScenarioConfig noise_free_scenario() {
  ScenarioConfig config = small_scenario();
  // A detector rate that divides the odometry rate keeps nearest-sample
  // alignment exact, so the identity is not blurred by time quantization.
  config.rates.detector_hz = 25.0;
  config.vio_synthesis.drift_velocity_intensity = Vec3::Zero();
  config.vio_synthesis.yaw_rate_intensity = 0.0;
  config.vio_synthesis.velocity_noise_stddev = 0.0;
  config.vio_synthesis.attitude_noise_stddev = 0.0;
  config.imu_synthesis.attitude_noise_stddev = 0.0;
  config.imu_synthesis.rate_noise_stddev = 0.0;
  config.detector.position_stddev = 0.0;
  config.detector.yaw_stddev = 0.0;
  return config;
}

std::uint64_t checksum(const RunLog& log) {
  // FNV-1a over the raw bytes of every row.
  std::uint64_t hash = 1469598103934665603ULL;
  const auto mix = [&hash](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      hash = (hash ^ p[i]) * 1099511628211ULL;
    }
  };
  for (const RunLogRow& row : log.rows) {
    mix(&row.t, sizeof row.t);
    mix(row.gt.position.data(), 3 * sizeof(double));
    mix(row.vio.position.data(), 3 * sizeof(double));
    mix(row.fused.position.data(), 3 * sizeof(double));
    mix(row.drift.data(), 8 * sizeof(double));
  }
  for (const MeasurementRecord& m : log.measurements) {
    mix(&m.t_meas, sizeof m.t_meas);
    mix(&m.confidence, sizeof m.confidence);
  }
  return hash;
}

}  // namespace

TEST_CASE("synthetic vio with zero intensities reproduces ground truth") {
  const Trajectory traj(flat_square_track(), 6.0);
  const auto gt = traj.series(100.0, 5.0);
  VioSynthesisParams params;
  params.drift_velocity_intensity = Vec3::Zero();
  params.yaw_rate_intensity = 0.0;
  params.velocity_noise_stddev = 0.0;
  params.attitude_noise_stddev = 0.0;
  Rng rng(1);
  const auto vio =
      synth_vio(gt, 100.0, params, StaticTransform::identity(), rng);
  REQUIRE(vio.size() == gt.size());
  for (std::size_t k = 0; k < vio.size(); ++k) {
    CHECK((vio[k].pose.position - gt[k].position).norm() < 1e-12);
    const Vec3 euler = euler_from_quat(vio[k].pose.orientation);
    CHECK(std::abs(wrap_angle(euler.z() - gt[k].euler.z())) < 1e-12);
    const Mat3 r = euler_to_rotation(euler.x(), euler.y(), euler.z());
    CHECK((r * vio[k].velocity_body - gt[k].velocity_world).norm() < 1e-9);
    CHECK((vio[k].angular_velocity_body - gt[k].body_rates).norm() < 1e-12);
  }
}

TEST_CASE("position drift grows like an integrated random walk") {
  // RMS over seeds of the drift at time t should scale ~ t^1.5; check the
  // ratio between two horizons against the theoretical exponent.
  const Trajectory traj(flat_square_track(), 6.0);
  const auto gt = traj.series(100.0, 8.0);
  VioSynthesisParams params;
  params.velocity_noise_stddev = 0.0;
  params.attitude_noise_stddev = 0.0;
  params.yaw_rate_intensity = 0.0;

  const std::size_t half = gt.size() / 2;
  double sq_half = 0.0, sq_full = 0.0;
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(seed + 1);
    const auto vio =
        synth_vio(gt, 100.0, params, StaticTransform::identity(), rng);
    sq_half += (vio[half].pose.position - gt[half].position).squaredNorm();
    sq_full += (vio.back().pose.position - gt.back().position).squaredNorm();
  }
  const double rms_half = std::sqrt(sq_half / seeds);
  const double rms_full = std::sqrt(sq_full / seeds);
  // t^{3/2} growth: doubling the horizon multiplies the RMS by 2^1.5.
  CHECK(rms_full / rms_half == doctest::Approx(std::pow(2.0, 1.5)).epsilon(0.25));
}

TEST_CASE("synthetic imu spacing and statistics") {
  const Trajectory traj(flat_square_track(), 6.0);
  const auto gt = traj.series(400.0, 5.0);

  SUBCASE("zero noise reproduces ground truth channels") {
    ImuSynthesisParams params;
    params.attitude_noise_stddev = 0.0;
    params.rate_noise_stddev = 0.0;
    Rng rng(3);
    const auto imu = synth_imu(gt, 400.0, params, rng);
    REQUIRE(imu.size() == gt.size());
    for (std::size_t k = 0; k < imu.size(); ++k) {
      CHECK(imu[k].channels.roll == gt[k].euler.x());
      CHECK(imu[k].channels.pitch == gt[k].euler.y());
      CHECK(imu[k].channels.roll_rate == gt[k].body_rates.x());
      CHECK(imu[k].channels.pitch_rate == gt[k].body_rates.y());
    }
  }

  SUBCASE("timestamps are spaced at exactly the sample period") {
    ImuSynthesisParams params;
    Rng rng(3);
    const auto imu = synth_imu(gt, 400.0, params, rng);
    for (std::size_t k = 1; k < imu.size(); ++k) {
      CHECK(imu[k].t - imu[k - 1].t == doctest::Approx(0.0025).epsilon(1e-12));
    }
  }

  SUBCASE("noise stddev is honored") {
    ImuSynthesisParams params;
    params.attitude_noise_stddev = 0.01;
    params.rate_noise_stddev = 0.03;
    Rng rng(7);
    const auto imu = synth_imu(gt, 400.0, params, rng);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < imu.size(); ++k) {
      const double err = imu[k].channels.roll - gt[k].euler.x();
      sum += err;
      sum_sq += err * err;
    }
    const double n = static_cast<double>(imu.size());
    const double stddev = std::sqrt(sum_sq / n - (sum / n) * (sum / n));
    CHECK(stddev == doctest::Approx(0.01).epsilon(0.05));
  }
}

TEST_CASE("identical seeds give identical run logs") {
  const ScenarioConfig config = small_scenario();
  const RunLog a = run_scenario(config);
  const RunLog b = run_scenario(config);
  CHECK(checksum(a) == checksum(b));

  ScenarioConfig other = config;
  other.seed = 43;
  CHECK(checksum(run_scenario(other)) != checksum(a));
}

TEST_CASE("zero drift and zero noise reproduce ground truth end to end") {
  const RunLog log = run_scenario(noise_free_scenario());
  REQUIRE(!log.rows.empty());
  for (const RunLogRow& row : log.rows) {
    CHECK((row.fused.position - row.gt.position).norm() < 1e-6);
    CHECK(std::abs(wrap_angle(row.fused.euler.x() - row.gt.euler.x())) < 1e-6);
    CHECK(std::abs(wrap_angle(row.fused.euler.y() - row.gt.euler.y())) < 1e-6);
    CHECK(std::abs(wrap_angle(row.fused.euler.z() - row.gt.euler.z())) < 1e-6);
    CHECK((row.fused.velocity - row.gt.velocity).norm() < 1e-6);
    CHECK((row.fused.rates - row.gt.rates).norm() < 1e-6);
  }
}

TEST_CASE("with the detector disabled, fused error tracks raw vio error") {
  ScenarioConfig config = small_scenario();
  config.detector_enabled = false;
  const RunLog log = run_scenario(config);
  CHECK(log.measurements.empty());

  const RunStats stats = compute_run_stats(log);
  // No corrections: the fused position can only follow the drifting VIO.
  CHECK(stats.fused.position.rmse ==
        doctest::Approx(stats.vio.position.rmse).epsilon(0.05));
  CHECK(stats.fused.position.rmse > 0.0);
}

TEST_CASE("detector measurements are delivered with the configured delay") {
  ScenarioConfig config = small_scenario();
  config.detector.latency = 0.06;
  const RunLog log = run_scenario(config);
  REQUIRE(!log.measurements.empty());
  for (const MeasurementRecord& m : log.measurements) {
    CHECK(m.t_delivered == doctest::Approx(m.t_meas + 0.06).epsilon(1e-12));
  }
}

TEST_CASE("event scheduling honors the stream rates") {
  const ScenarioConfig config = small_scenario();
  const RunLog log = run_scenario(config);
  CHECK(log.rows.size() == 1000);   // 10 s at 100 Hz
  CHECK(log.imu.size() == 4000);    // 10 s at 400 Hz
  for (std::size_t k = 1; k < log.rows.size(); ++k) {
    CHECK(log.rows[k].t - log.rows[k - 1].t ==
          doctest::Approx(0.01).epsilon(1e-12));
  }
}

TEST_CASE("laps override duration") {
  ScenarioConfig config = small_scenario();
  config.laps = 1;
  const Trajectory traj(config.track, config.speed);
  const RunLog log = run_scenario(config);
  const auto expected =
      static_cast<std::size_t>(std::ceil(traj.lap_period() * 100.0));
  CHECK(log.rows.size() == expected);
}
