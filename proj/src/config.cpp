#include "driftfuse/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "driftfuse/logs.hpp"

namespace driftfuse {

namespace {
std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValueFile KeyValueFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  KeyValueFile file = from_string(buffer.str(), path);
  file.directory_ = std::filesystem::path(path).parent_path().string();
  return file;
}

KeyValueFile KeyValueFile::from_string(const std::string& text,
                                       const std::string& name) {
  KeyValueFile file;
  file.name_ = name;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(name + ": line " + std::to_string(line_no) +
                        " is not `key = value`");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(name + ": empty key on line " + std::to_string(line_no));
    }
    if (!file.entries_.emplace(key, Entry{value}).second) {
      throw ConfigError(name + ": duplicate key: " + key);
    }
  }
  return file;
}

bool KeyValueFile::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

const std::string* KeyValueFile::fetch(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    return nullptr;
  }
  it->second.consumed = true;
  return &it->second.value;
}

double KeyValueFile::parse_number(const std::string& key,
                                  const std::string& raw) const {
  const std::string value = trim(raw);
  double out = 0.0;
  const auto* begin = value.data();
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(name_ + ": key `" + key + "` has non-numeric value `" +
                      raw + "`");
  }
  return out;
}

double KeyValueFile::number(const std::string& key, double fallback) {
  const std::string* raw = fetch(key);
  return raw ? parse_number(key, *raw) : fallback;
}

double KeyValueFile::required_number(const std::string& key) {
  const std::string* raw = fetch(key);
  if (!raw) {
    throw ConfigError(name_ + ": missing required key `" + key + "`");
  }
  return parse_number(key, *raw);
}

std::int64_t KeyValueFile::integer(const std::string& key,
                                   std::int64_t fallback) {
  const double v = number(key, static_cast<double>(fallback));
  const auto out = static_cast<std::int64_t>(v);
  if (static_cast<double>(out) != v) {
    throw ConfigError(name_ + ": key `" + key + "` must be an integer");
  }
  return out;
}

std::uint64_t KeyValueFile::unsigned_integer(const std::string& key,
                                             std::uint64_t fallback) {
  const std::string* raw = fetch(key);
  if (!raw) {
    return fallback;
  }
  const std::string value = trim(*raw);
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(name_ + ": key `" + key +
                      "` must be an unsigned integer");
  }
  return out;
}

bool KeyValueFile::flag(const std::string& key, bool fallback) {
  const std::string* raw = fetch(key);
  if (!raw) {
    return fallback;
  }
  const std::string v = trim(*raw);
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    return true;
  }
  if (v == "false" || v == "0" || v == "no" || v == "off") {
    return false;
  }
  throw ConfigError(name_ + ": key `" + key + "` must be a boolean");
}

std::string KeyValueFile::text(const std::string& key,
                               const std::string& fallback) {
  const std::string* raw = fetch(key);
  return raw ? *raw : fallback;
}

std::string KeyValueFile::required_text(const std::string& key) {
  const std::string* raw = fetch(key);
  if (!raw || raw->empty()) {
    throw ConfigError(name_ + ": missing required key `" + key + "`");
  }
  return *raw;
}

std::vector<double> KeyValueFile::number_list(
    const std::string& key, const std::vector<double>& fallback) {
  const std::string* raw = fetch(key);
  if (!raw) {
    return fallback;
  }
  std::vector<double> out;
  std::string item;
  std::istringstream in(*raw);
  while (std::getline(in, item, ',')) {
    out.push_back(parse_number(key, item));
  }
  if (out.empty()) {
    throw ConfigError(name_ + ": key `" + key + "` has an empty list");
  }
  return out;
}

void KeyValueFile::finish() const {
  for (const auto& [key, entry] : entries_) {
    if (!entry.consumed) {
      throw ConfigError(name_ + ": unknown config key `" + key + "`");
    }
  }
}

std::string KeyValueFile::resolve_path(const std::string& relative) const {
  const std::filesystem::path p(relative);
  if (p.is_absolute() || directory_.empty()) {
    return relative;
  }
  return (std::filesystem::path(directory_) / p).string();
}

namespace {

DriftModelParams read_drift_model(KeyValueFile& f, double default_dt) {
  DriftModelParams p;
  p.dt = f.number("drift.dt", default_dt);
  p.friction_x = f.number("drift.friction.x", p.friction_x);
  p.friction_y = f.number("drift.friction.y", p.friction_y);
  p.friction_z = f.number("drift.friction.z", p.friction_z);
  p.friction_yaw = f.number("drift.friction.yaw", p.friction_yaw);
  p.process_var_x = f.number("drift.q.x", p.process_var_x);
  p.process_var_vx = f.number("drift.q.vx", p.process_var_vx);
  p.process_var_y = f.number("drift.q.y", p.process_var_y);
  p.process_var_vy = f.number("drift.q.vy", p.process_var_vy);
  p.process_var_z = f.number("drift.q.z", p.process_var_z);
  p.process_var_vz = f.number("drift.q.vz", p.process_var_vz);
  p.process_var_yaw = f.number("drift.q.yaw", p.process_var_yaw);
  p.process_var_yaw_rate = f.number("drift.q.r", p.process_var_yaw_rate);
  return p;
}

MeasurementNoiseParams read_noise_map(KeyValueFile& f) {
  MeasurementNoiseParams p;
  p.amplitude = f.number("noise_map.amplitude", p.amplitude);
  p.steepness = f.number("noise_map.steepness", p.steepness);
  p.midpoint = f.number("noise_map.midpoint", p.midpoint);
  p.floor = f.number("noise_map.floor", p.floor);
  return p;
}

ImuFilterParams read_imu_filter(KeyValueFile& f) {
  ImuFilterParams p;
  p.lowpass_cutoff_hz = f.number("imu_filter.lowpass_hz", p.lowpass_cutoff_hz);
  p.notch_center_hz = f.number("imu_filter.notch_hz", p.notch_center_hz);
  p.notch_bandwidth_hz =
      f.number("imu_filter.notch_bandwidth_hz", p.notch_bandwidth_hz);
  return p;
}

}  // namespace

ScenarioConfig load_scenario_config(const std::string& path) {
  KeyValueFile f = KeyValueFile::load(path);
  ScenarioConfig c;

  c.track = load_track(f.resolve_path(f.required_text("track")));
  c.speed = f.number("speed", c.speed);
  c.laps = static_cast<int>(f.integer("laps", c.laps));
  c.duration = f.number("duration", c.duration);
  c.seed = f.unsigned_integer("seed", c.seed);

  c.rates.vio_hz = f.number("rate.vio", c.rates.vio_hz);
  c.rates.detector_hz = f.number("rate.detector", c.rates.detector_hz);
  c.rates.imu_hz = f.number("rate.imu", c.rates.imu_hz);

  c.detector_enabled = f.flag("detector.enabled", c.detector_enabled);
  c.detector.position_stddev = f.number("detector.sigma_p", c.detector.position_stddev);
  c.detector.yaw_stddev = f.number("detector.sigma_yaw", c.detector.yaw_stddev);
  c.detector.latency = f.number("detector.latency", c.detector.latency);
  c.detector.rate_hz = c.rates.detector_hz;
  c.detector.visibility_range = f.number("detector.range", c.detector.visibility_range);
  c.detector.fov_half_angle = f.number("detector.fov_half_angle", c.detector.fov_half_angle);
  c.detector.base_reprojection_error =
      f.number("detector.base_error", c.detector.base_reprojection_error);
  c.detector.reprojection_error_per_meter =
      f.number("detector.error_per_meter", c.detector.reprojection_error_per_meter);

  c.vio_synthesis.drift_velocity_intensity.x() =
      f.number("vio.drift_intensity.x", c.vio_synthesis.drift_velocity_intensity.x());
  c.vio_synthesis.drift_velocity_intensity.y() =
      f.number("vio.drift_intensity.y", c.vio_synthesis.drift_velocity_intensity.y());
  c.vio_synthesis.drift_velocity_intensity.z() =
      f.number("vio.drift_intensity.z", c.vio_synthesis.drift_velocity_intensity.z());
  c.vio_synthesis.yaw_rate_intensity =
      f.number("vio.yaw_rate_intensity", c.vio_synthesis.yaw_rate_intensity);
  c.vio_synthesis.velocity_noise_stddev =
      f.number("vio.velocity_noise", c.vio_synthesis.velocity_noise_stddev);
  c.vio_synthesis.attitude_noise_stddev =
      f.number("vio.attitude_noise", c.vio_synthesis.attitude_noise_stddev);

  c.imu_synthesis.attitude_noise_stddev =
      f.number("imu.attitude_noise", c.imu_synthesis.attitude_noise_stddev);
  c.imu_synthesis.rate_noise_stddev =
      f.number("imu.rate_noise", c.imu_synthesis.rate_noise_stddev);

  c.drift_model = read_drift_model(f, 1.0 / c.rates.vio_hz);
  c.measurement_noise = read_noise_map(f);
  c.gating.min_confidence = f.number("gating.threshold", c.gating.min_confidence);
  c.imu_filter = read_imu_filter(f);
  c.initial_covariance =
      f.number("estimator.initial_covariance", c.initial_covariance);
  c.buffer_window = f.number("estimator.buffer_window", c.buffer_window);

  f.finish();
  c.validate();
  return c;
}

SweepGrid load_sweep_grid(const std::string& path) {
  KeyValueFile f = KeyValueFile::load(path);
  SweepGrid g;
  g.delays = f.number_list("delays", g.delays);
  g.position_noises = f.number_list("position_noises", g.position_noises);
  g.yaw_noises = f.number_list("yaw_noises", g.yaw_noises);
  g.trials = static_cast<int>(f.integer("trials", g.trials));
  const std::string mode = f.text("mode", "paired");
  if (mode == "paired") {
    g.paired = true;
  } else if (mode == "product") {
    g.paired = false;
  } else {
    throw ConfigError(path + ": key `mode` must be `paired` or `product`");
  }
  f.finish();
  g.validate();
  return g;
}

PipelineParams load_pipeline_params(const std::string& path) {
  KeyValueFile f = KeyValueFile::load(path);
  PipelineParams p;
  p.drift_model = read_drift_model(f, p.drift_model.dt);
  p.measurement_noise = read_noise_map(f);
  p.gating.min_confidence = f.number("gating.threshold", p.gating.min_confidence);
  p.imu_filter = read_imu_filter(f);
  p.initial_covariance =
      f.number("estimator.initial_covariance", p.initial_covariance);
  p.buffer_window = f.number("estimator.buffer_window", p.buffer_window);
  p.imu_nominal_dt = f.number("estimator.imu_dt", p.imu_nominal_dt);
  p.calibration_enabled = f.flag("calibration.enabled", false);
  const double tx = f.number("transform.x", 0.0);
  const double ty = f.number("transform.y", 0.0);
  const double tz = f.number("transform.z", 0.0);
  const double troll = f.number("transform.roll", 0.0);
  const double tpitch = f.number("transform.pitch", 0.0);
  const double tyaw = f.number("transform.yaw", 0.0);
  p.vio_to_world = {Vec3(tx, ty, tz), euler_to_quat(troll, tpitch, tyaw)};
  f.finish();
  p.validate();
  return p;
}

void write_replay_config(const std::string& path, const ScenarioConfig& c) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write replay config: " + path);
  }
  out << "# Estimator configuration for replaying the logs in this directory.\n"
      << "# The logged odometry is already world-frame, so calibration and\n"
      << "# the static transform stay disabled.\n";
  const auto emit = [&out](const char* key, double value) {
    out << key << " = " << format_double(value) << '\n';
  };
  emit("drift.dt", c.drift_model.dt);
  emit("drift.friction.x", c.drift_model.friction_x);
  emit("drift.friction.y", c.drift_model.friction_y);
  emit("drift.friction.z", c.drift_model.friction_z);
  emit("drift.friction.yaw", c.drift_model.friction_yaw);
  emit("drift.q.x", c.drift_model.process_var_x);
  emit("drift.q.vx", c.drift_model.process_var_vx);
  emit("drift.q.y", c.drift_model.process_var_y);
  emit("drift.q.vy", c.drift_model.process_var_vy);
  emit("drift.q.z", c.drift_model.process_var_z);
  emit("drift.q.vz", c.drift_model.process_var_vz);
  emit("drift.q.yaw", c.drift_model.process_var_yaw);
  emit("drift.q.r", c.drift_model.process_var_yaw_rate);
  emit("noise_map.amplitude", c.measurement_noise.amplitude);
  emit("noise_map.steepness", c.measurement_noise.steepness);
  emit("noise_map.midpoint", c.measurement_noise.midpoint);
  emit("noise_map.floor", c.measurement_noise.floor);
  emit("gating.threshold", c.gating.min_confidence);
  emit("imu_filter.lowpass_hz", c.imu_filter.lowpass_cutoff_hz);
  emit("imu_filter.notch_hz", c.imu_filter.notch_center_hz);
  emit("imu_filter.notch_bandwidth_hz", c.imu_filter.notch_bandwidth_hz);
  emit("estimator.initial_covariance", c.initial_covariance);
  emit("estimator.buffer_window", c.buffer_window);
  emit("estimator.imu_dt", 1.0 / c.rates.imu_hz);
  out << "calibration.enabled = false\n";
}

}  // namespace driftfuse
