#include "tubesim/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tubesim {

void SensorConfig::validate() const {
  if (baro_noise_std < 0.0 || gyro_noise_std < 0.0 || accel_noise_std < 0.0 ||
      vio_noise_std < 0.0 || vio_yaw_noise_std < 0.0) {
    throw std::invalid_argument("noise std must be >= 0");
  }
  if (!(range_max > 0.0)) throw std::invalid_argument("range_max must be > 0");
  if (!(accel_saturation > 0.0)) {
    throw std::invalid_argument("accel_saturation must be > 0");
  }
  if (!(vio_rate > 0.0)) throw std::invalid_argument("vio_rate must be > 0");
  if (baro_blackout < 0.0) throw std::invalid_argument("baro_blackout must be >= 0");
}

void VioVarianceTracker::add(double t, double x, double y) {
  samples_.push_back({t, x, y});
  while (!samples_.empty() && samples_.front().t < t - window_) {
    samples_.pop_front();
  }
}

double VioVarianceTracker::value() const {
  if (samples_.size() < 2) return std::numeric_limits<double>::infinity();
  double mx = 0.0, my = 0.0;
  for (const auto& s : samples_) {
    mx += s.x;
    my += s.y;
  }
  const double n = static_cast<double>(samples_.size());
  mx /= n;
  my /= n;
  double vx = 0.0, vy = 0.0;
  for (const auto& s : samples_) {
    vx += (s.x - mx) * (s.x - mx);
    vy += (s.y - my) * (s.y - my);
  }
  return std::max(vx, vy) / n;  // population variance
}

SensorSuite::SensorSuite(SensorConfig cfg)
    : cfg_(cfg), rng_(cfg.rng_seed), tracker_(cfg.vio_window) {
  cfg_.validate();
}

double SensorSuite::gauss(double std) {
  // Always draw so the stream position does not depend on the noise setting.
  const double u = unit_normal_(rng_);
  return std * u;
}

void SensorSuite::enable_vio(bool on) {
  if (on && !vio_enabled_) tracker_.reset();
  vio_enabled_ = on;
}

SensorFrame SensorSuite::sample(const RigidBodyState& truth,
                                const Eigen::Vector3d& accel_world, double t,
                                double launch_time) {
  SensorFrame f;
  f.time = t;

  // Specific force in the body frame, then per-axis clip.
  const Eigen::Vector3d specific_world =
      accel_world + Eigen::Vector3d(0, 0, kGravity);
  Eigen::Vector3d accel = truth.attitude.conjugate() * specific_world;
  for (int i = 0; i < 3; ++i) {
    accel(i) += gauss(cfg_.accel_noise_std);
    accel(i) = std::clamp(accel(i), -cfg_.accel_saturation, cfg_.accel_saturation);
  }
  f.accel = accel;

  for (int i = 0; i < 3; ++i) {
    f.gyro(i) = truth.angular_rate(i) + gauss(cfg_.gyro_noise_std);
  }

  f.baro_altitude = truth.position.z() + gauss(cfg_.baro_noise_std);
  f.baro_valid = !(t >= launch_time && t < launch_time + cfg_.baro_blackout);

  // Rangefinder along body -z toward the ground plane z = 0.
  const Eigen::Vector3d beam = truth.attitude * (-Eigen::Vector3d::UnitZ());
  f.range_valid = false;
  if (beam.z() < -std::cos(cfg_.range_fov)) {
    const double dist = truth.position.z() / (-beam.z());
    if (dist >= 0.0 && dist <= cfg_.range_max) {
      f.range_distance = dist;
      f.range_valid = true;
    }
  }

  if (vio_enabled_ && t - last_vio_time_ >= 1.0 / cfg_.vio_rate - 1e-9) {
    last_vio_time_ = t;
    f.vio_valid = true;
    f.vio_position = truth.position + Eigen::Vector3d(gauss(cfg_.vio_noise_std),
                                                      gauss(cfg_.vio_noise_std),
                                                      gauss(cfg_.vio_noise_std));
    f.vio_yaw = yaw_of(truth.attitude) + gauss(cfg_.vio_yaw_noise_std);
    tracker_.add(t, f.vio_position.x(), f.vio_position.y());
  }
  f.vio_variance_xy = tracker_.value();
  return f;
}

double yaw_of(const Eigen::Quaterniond& q) {
  const Eigen::Vector3d x_world = q * Eigen::Vector3d::UnitX();
  return std::atan2(x_world.y(), x_world.x());
}

}  // namespace tubesim
