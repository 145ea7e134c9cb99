#include "driftfuse/landmark_model.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace driftfuse {

namespace {
// Confidence-model constants of the detector's Gaussian weighting.
constexpr double kConfidenceSigma = 0.15;
constexpr double kConfidenceBeta = 0.4;

struct GateView {
  int corners = 0;
  double distance = std::numeric_limits<double>::infinity();
};

// Corners of the nearest gate with at least one corner in view.
GateView nearest_visible(const Pose& vehicle, std::span<const Gate> gates,
                         const DetectorModel& model) {
  const Mat3 body_to_world = vehicle.orientation.normalized().toRotationMatrix();
  const Vec3 forward = body_to_world.col(0);
  const double cos_fov = std::cos(model.fov_half_angle);

  GateView best;
  for (const Gate& gate : gates) {
    const double distance = (gate.center - vehicle.position).norm();
    if (distance >= best.distance) {
      continue;
    }
    int count = 0;
    for (const Vec3& corner : gate_corners(gate)) {
      const Vec3 offset = corner - vehicle.position;
      const double range = offset.norm();
      if (range > model.visibility_range || range == 0.0) {
        continue;
      }
      if (forward.dot(offset) >= cos_fov * range) {
        ++count;
      }
    }
    if (count > 0) {
      best.corners = count;
      best.distance = distance;
    }
  }
  return best;
}
}  // namespace

void Gate::validate() const {
  if (!(inner_size > 0.0) || !(outer_size > inner_size)) {
    throw ConfigError("gate sizes must satisfy 0 < inner < outer");
  }
}

void DetectorModel::validate() const {
  if (!(rate_hz > 0.0)) {
    throw ConfigError("detector rate must be > 0");
  }
  for (double v : {position_stddev, yaw_stddev, latency, visibility_range,
                   fov_half_angle, base_reprojection_error,
                   reprojection_error_per_meter}) {
    if (!(v >= 0.0)) {
      throw ConfigError("detector model parameters must be >= 0");
    }
  }
}

double reprojection_confidence(double reprojection_error, int corner_count) {
  if (!(reprojection_error >= 0.0) || corner_count < 0) {
    throw InvalidInputError("reprojection error and corner count must be >= 0");
  }
  const double e2 = reprojection_error * reprojection_error;
  const double shape = std::exp(-e2 / (2.0 * kConfidenceSigma * kConfidenceSigma));
  const double support = 1.0 - std::exp(-kConfidenceBeta * corner_count);
  return shape * support;
}

std::array<Vec3, 4> gate_corners(const Gate& gate) {
  gate.validate();
  const double h = gate.inner_size / 2.0;
  const Vec3 lateral(-std::sin(gate.yaw), std::cos(gate.yaw), 0.0);
  const Vec3 up = Vec3::UnitZ();
  return {gate.center + h * lateral + h * up, gate.center - h * lateral + h * up,
          gate.center - h * lateral - h * up, gate.center + h * lateral - h * up};
}

int visible_corners(const Pose& vehicle, std::span<const Gate> gates,
                    const DetectorModel& model) {
  return nearest_visible(vehicle, gates, model).corners;
}

std::optional<LandmarkMeasurement> synth_measurement(
    const Pose& gt_pose, double t, std::span<const Gate> gates,
    const DetectorModel& model, Rng& rng) {
  const GateView view = nearest_visible(gt_pose, gates, model);
  if (view.corners == 0) {
    return std::nullopt;
  }
  const double reprojection_error =
      model.base_reprojection_error +
      model.reprojection_error_per_meter * view.distance;

  LandmarkMeasurement m;
  m.t = t;
  m.position = gt_pose.position + Vec3(rng.gaussian(model.position_stddev),
                                       rng.gaussian(model.position_stddev),
                                       rng.gaussian(model.position_stddev));
  const double gt_yaw = euler_from_quat(gt_pose.orientation).z();
  m.yaw = wrap_angle(gt_yaw + rng.gaussian(model.yaw_stddev));
  m.confidence = reprojection_confidence(reprojection_error, view.corners);
  return m;
}

std::vector<Gate> load_track(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open track file: " + path);
  }
  std::vector<Gate> gates;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    Gate g;
    if (!(fields >> g.center.x())) {
      continue;  // blank or comment-only line
    }
    if (!(fields >> g.center.y() >> g.center.z() >> g.yaw >> g.inner_size >>
          g.outer_size)) {
      throw ConfigError("track file " + path + ": malformed gate on line " +
                        std::to_string(line_no));
    }
    g.validate();
    gates.push_back(g);
  }
  return gates;
}

}  // namespace driftfuse
