#include "driftfuse/trajectory.hpp"

#include <cmath>

namespace driftfuse {

namespace {
constexpr double kMaxSpeed = 13.0;
constexpr double kMinGateSpacing = 1e-6;
// Pitch magnitudes beyond this are treated as a degenerate (near-vertical)
// track; they would put Euler extraction next to the gimbal singularity.
constexpr double kMaxPitch = kPi / 2.0 - 0.01;

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; the
// rule is symmetric).
constexpr int kQuadHalf = 8;
constexpr double kQuadNode[kQuadHalf] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kQuadWeight[kQuadHalf] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};
}  // namespace

Trajectory::Trajectory(std::span<const Gate> gates, double speed)
    : speed_(speed), segment_count_(static_cast<int>(gates.size())) {
  if (gates.size() < 2) {
    throw ConfigError("trajectory requires at least two gates");
  }
  if (!(speed > 0.0) || speed > kMaxSpeed) {
    throw ConfigError("trajectory speed must be in (0, 13] m/s");
  }
  const int n = segment_count_;
  knots_.reserve(n);
  for (const Gate& g : gates) {
    knots_.push_back(g.center);
  }
  for (int i = 0; i < n; ++i) {
    if ((knots_[i] - knots_[(i + 1) % n]).norm() < kMinGateSpacing) {
      throw ConfigError("degenerate track: coincident neighbouring gates");
    }
  }

  // Periodic cubic spline with unit knot spacing: solve for the second
  // derivatives M from M[i-1] + 4 M[i] + M[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]).
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd rhs(n, 3);
  for (int i = 0; i < n; ++i) {
    system(i, i) += 4.0;
    system(i, (i + 1) % n) += 1.0;
    system(i, (i - 1 + n) % n) += 1.0;
    rhs.row(i) =
        6.0 * (knots_[(i + 1) % n] - 2.0 * knots_[i] + knots_[(i - 1 + n) % n])
                  .transpose();
  }
  const Eigen::MatrixXd moments = system.partialPivLu().solve(rhs);

  b_.resize(n);
  c_.resize(n);
  e_.resize(n);
  for (int i = 0; i < n; ++i) {
    const Vec3 mi = moments.row(i).transpose();
    const Vec3 mn = moments.row((i + 1) % n).transpose();
    c_[i] = mi / 2.0;
    e_[i] = (mn - mi) / 6.0;
    b_[i] = (knots_[(i + 1) % n] - knots_[i]) - (2.0 * mi + mn) / 6.0;
  }

  cumulative_length_.assign(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    cumulative_length_[i + 1] =
        cumulative_length_[i] + segment_length(i, 0.0, 1.0);
  }
  lap_length_ = cumulative_length_[n];
  if (!(lap_length_ > 0.0)) {
    throw ConfigError("degenerate track: zero path length");
  }

  // Reject tracks that demand near-vertical flight anywhere on the loop.
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 64; ++k) {
      const Derivatives d = eval(i + (k + 0.5) / 64.0);
      const double g = d.first.norm();
      if (g < 1e-12) {
        continue;  // cusp (e.g. a two-gate out-and-back turnaround)
      }
      const double pitch = std::asin(std::clamp(d.first.z() / g, -1.0, 1.0));
      if (std::abs(pitch) > kMaxPitch) {
        throw ConfigError("track requires near-vertical flight");
      }
    }
  }
}

Trajectory::Derivatives Trajectory::eval(double u) const {
  const int n = segment_count_;
  double wrapped = std::fmod(u, static_cast<double>(n));
  if (wrapped < 0.0) {
    wrapped += n;
  }
  int i = static_cast<int>(wrapped);
  if (i >= n) {
    i = n - 1;
  }
  const double d = wrapped - i;
  Derivatives out;
  out.value = knots_[i] + d * (b_[i] + d * (c_[i] + d * e_[i]));
  out.first = b_[i] + d * (2.0 * c_[i] + 3.0 * d * e_[i]);
  out.second = 2.0 * c_[i] + 6.0 * d * e_[i];
  return out;
}

double Trajectory::segment_length(int segment, double from, double to) const {
  // Gauss-Legendre quadrature of |C'(u)| over [from, to] within a segment.
  const double half = (to - from) / 2.0;
  const double mid = (from + to) / 2.0;
  double sum = 0.0;
  for (int k = 0; k < kQuadHalf; ++k) {
    const double lo = segment + mid - half * kQuadNode[k];
    const double hi = segment + mid + half * kQuadNode[k];
    sum += kQuadWeight[k] * (eval(lo).first.norm() + eval(hi).first.norm());
  }
  return half * sum;
}

double Trajectory::parameter_at_arc_length(double s) const {
  const int n = segment_count_;
  // Locate the segment, then refine within it.
  int lo = 0, hi = n;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (cumulative_length_[mid] <= s ? lo : hi) = mid;
  }
  const double target = s - cumulative_length_[lo];

  double a = 0.0, b = 1.0;
  double d = std::clamp(target / (cumulative_length_[lo + 1] -
                                  cumulative_length_[lo]),
                        0.0, 1.0);
  for (int iter = 0; iter < 60; ++iter) {
    const double f = segment_length(lo, 0.0, d) - target;
    if (f > 0.0) {
      b = d;
    } else {
      a = d;
    }
    const double g = eval(lo + d).first.norm();
    double next = (g > 1e-12) ? d - f / g : (a + b) / 2.0;
    if (!(next > a && next < b)) {
      next = (a + b) / 2.0;
    }
    if (std::abs(next - d) < 1e-14) {
      d = next;
      break;
    }
    d = next;
  }
  return lo + d;
}

TrajectorySample Trajectory::sample(double t) const {
  double s = std::fmod(speed_ * t, lap_length_);
  if (s < 0.0) {
    s += lap_length_;
  }
  const double u = parameter_at_arc_length(s);
  const Derivatives d = eval(u);

  const double g = d.first.norm();
  if (g < 1e-12) {
    // Path cusp: position is well defined, derivatives are not.
    TrajectorySample out;
    out.position = d.value;
    return out;
  }
  const double u_dot = speed_ / g;
  const double g_prime = d.first.dot(d.second) / g;
  const double u_ddot = -speed_ * g_prime * u_dot / (g * g);

  const Vec3 velocity = d.first * u_dot;
  const Vec3 accel = d.second * (u_dot * u_dot) + d.first * u_ddot;

  const double vx = velocity.x(), vy = velocity.y(), vz = velocity.z();
  const double v_mag = velocity.norm();
  const double v_mag_dot = velocity.dot(accel) / v_mag;
  const double hxy2 = vx * vx + vy * vy;

  const double yaw = std::atan2(vy, vx);
  const double yaw_rate = (vx * accel.y() - vy * accel.x()) / hxy2;

  const double w = vz / v_mag;
  const double pitch = -std::asin(std::clamp(w, -1.0, 1.0));
  const double w_dot = (accel.z() * v_mag - vz * v_mag_dot) / (v_mag * v_mag);
  const double pitch_rate = -w_dot / std::sqrt(std::max(1.0 - w * w, 1e-12));

  // Body rates from Euler rates for Z-Y-X angles with zero roll:
  // p = -yaw_rate * sin(pitch), q = pitch_rate, r = yaw_rate * cos(pitch).
  TrajectorySample out;
  out.position = d.value;
  out.euler = Vec3(0.0, pitch, yaw);
  out.velocity_world = velocity;
  out.body_rates = Vec3(-yaw_rate * std::sin(pitch), pitch_rate,
                        yaw_rate * std::cos(pitch));
  return out;
}

std::vector<TrajectorySample> Trajectory::series(double rate_hz,
                                                 double duration) const {
  if (!(rate_hz > 0.0) || !(duration > 0.0)) {
    throw ConfigError("series requires positive rate and duration");
  }
  const auto count = static_cast<std::size_t>(std::ceil(duration * rate_hz));
  std::vector<TrajectorySample> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(sample(static_cast<double>(k) / rate_hz));
  }
  return out;
}

}  // namespace driftfuse
