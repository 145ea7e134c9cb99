#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "driftfuse.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kTrackText =
    "15 0 3 0 1.5 2.7\n"
    "0 12 3 0 1.5 2.7\n"
    "-15 0 3 0 1.5 2.7\n"
    "0 -12 3 0 1.5 2.7\n";

df_odometry identity_odometry(double t) {
  df_odometry s{};
  s.t = t;
  s.orientation_wxyz[0] = 1.0;
  return s;
}

}  // namespace

TEST_CASE("status names and argument validation") {
  CHECK(std::strcmp(df_status_name(DF_OK), "ok") == 0);
  CHECK(df_status_name(DF_ERR_CONFIG) != nullptr);

  CHECK(df_simulate(nullptr, "/tmp/x", nullptr) == DF_ERR_INVALID_ARGUMENT);
  CHECK(df_last_error()[0] != '\0');
  CHECK(df_pipeline_create(nullptr, nullptr) == DF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("missing config file reports a config error") {
  CHECK(df_simulate("/nonexistent/scenario.cfg", "/tmp/df_capi_none",
                    nullptr) == DF_ERR_CONFIG);
  const std::string message = df_last_error();
  CHECK(message.find("scenario.cfg") != std::string::npos);
}

TEST_CASE("pipeline lifecycle and drift estimation") {
  TempDir dir("df_capi_pipeline");
  // Calibration off: the fed odometry is already world-frame.
  write_file(dir.file("estimator.cfg"), "calibration.enabled = false\n");

  df_pipeline* pipeline = nullptr;
  REQUIRE(df_pipeline_create(dir.file("estimator.cfg").c_str(), &pipeline) ==
          DF_OK);
  REQUIRE(pipeline != nullptr);

  // Constant 1 m x-drift between odometry and landmark fixes.
  double mean[8] = {};
  for (int k = 0; k < 400; ++k) {
    const double t = k / 100.0;
    df_imu_sample imu{};
    imu.t = t;
    CHECK(df_pipeline_on_imu(pipeline, &imu) == DF_OK);

    df_odometry odom = identity_odometry(t);
    odom.position[0] = 1.0;
    df_fused_state fused{};
    CHECK(df_pipeline_on_odometry(pipeline, &odom, &fused) == DF_OK);

    if (k % 3 == 0) {
      df_landmark fix{};
      fix.t = t;
      fix.confidence = 1.0;
      int accepted = 0;
      CHECK(df_pipeline_on_landmark(pipeline, &fix, &accepted) == DF_OK);
      CHECK(accepted == 1);
    }
  }

  double covariance[64] = {};
  REQUIRE(df_pipeline_drift_state(pipeline, mean, covariance) == DF_OK);
  CHECK(mean[0] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(covariance[0] > 0.0);
  CHECK(covariance[0] == covariance[0 * 8 + 0]);

  df_fused_state fused{};
  df_odometry odom = identity_odometry(4.0);
  odom.position[0] = 1.0;
  REQUIRE(df_pipeline_on_odometry(pipeline, &odom, &fused) == DF_OK);
  CHECK(fused.position[0] == doctest::Approx(0.0).epsilon(0.02));

  df_pipeline_destroy(pipeline);
}

TEST_CASE("default pipeline re-zeroes the stream at the first sample") {
  df_pipeline* pipeline = nullptr;
  REQUIRE(df_pipeline_create_default(&pipeline) == DF_OK);
  df_odometry odom = identity_odometry(0.0);
  odom.position[0] = 7.0;
  odom.position[2] = -2.0;
  df_fused_state fused{};
  REQUIRE(df_pipeline_on_odometry(pipeline, &odom, &fused) == DF_OK);
  CHECK(fused.position[0] == 0.0);
  CHECK(fused.position[2] == 0.0);
  df_pipeline_destroy(pipeline);
}

TEST_CASE("gated landmark is reported as not accepted") {
  df_pipeline* pipeline = nullptr;
  REQUIRE(df_pipeline_create_default(&pipeline) == DF_OK);
  df_odometry odom = identity_odometry(0.0);
  df_pipeline_on_odometry(pipeline, &odom, nullptr);

  df_landmark fix{};
  fix.t = 0.0;
  fix.confidence = 0.2;
  int accepted = 1;
  CHECK(df_pipeline_on_landmark(pipeline, &fix, &accepted) == DF_OK);
  CHECK(accepted == 0);

  fix.confidence = 2.0;  // outside [0, 1]
  CHECK(df_pipeline_on_landmark(pipeline, &fix, &accepted) ==
        DF_ERR_INVALID_ARGUMENT);
  df_pipeline_destroy(pipeline);
}

TEST_CASE("simulate, replay and sweep through the C interface") {
  TempDir dir("df_capi_cmds");
  write_file(dir.file("oval.txt"), kTrackText);
  write_file(dir.file("scenario.cfg"),
             "track = oval.txt\nspeed = 6\nduration = 4\nseed = 3\n");
  write_file(dir.file("grid.cfg"),
             "delays = 0\nposition_noises = 0.01\nyaw_noises = 0.01\n"
             "trials = 1\n");

  REQUIRE(df_simulate(dir.file("scenario.cfg").c_str(),
                      dir.file("sim").c_str(), nullptr) == DF_OK);
  REQUIRE(df_replay(dir.file("sim").c_str(), nullptr,
                    dir.file("replay").c_str()) == DF_OK);
  CHECK(read_file(dir.file("sim") + "/fused.csv") ==
        read_file(dir.file("replay") + "/fused.csv"));

  df_run_options options{};
  options.parallel = 2;
  REQUIRE(df_sweep(dir.file("scenario.cfg").c_str(), dir.file("grid.cfg").c_str(),
                   dir.file("sweep").c_str(), &options) == DF_OK);
  CHECK(fs::exists(fs::path(dir.file("sweep")) / "sweep.md"));

  // Seed override changes the outputs.
  df_run_options seeded{};
  seeded.has_seed = 1;
  seeded.seed = 999;
  REQUIRE(df_simulate(dir.file("scenario.cfg").c_str(),
                      dir.file("sim2").c_str(), &seeded) == DF_OK);
  CHECK(read_file(dir.file("sim") + "/run.csv") !=
        read_file(dir.file("sim2") + "/run.csv"));
}
