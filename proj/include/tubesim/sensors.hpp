#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <deque>
#include <random>

#include "tubesim/dynamics.hpp"

namespace tubesim {

/// Emulated sensor suite parameters.
struct SensorConfig {
  double accel_saturation = 16.0 * kGravity;  // m/s^2 per axis
  double baro_blackout = 3.0;                 // s after launch
  double baro_noise_std = 0.05;               // m
  double gyro_noise_std = 0.005;              // rad/s
  double accel_noise_std = 0.05;              // m/s^2
  double range_max = 60.0;                    // m
  double range_fov = 60.0 * M_PI / 180.0;     // rad half-cone about nadir
  double vio_rate = 30.0;                     // Hz
  double vio_noise_std = 0.02;                // m
  double vio_yaw_noise_std = 0.01;            // rad
  double vio_window = 1.0;                    // s, variance window
  uint64_t rng_seed = 1;

  void validate() const;
};

/// One timestamped snapshot of every emulated channel. Invalid channels are
/// flagged, never fabricated.
struct SensorFrame {
  double time = 0.0;
  Eigen::Vector3d accel{0, 0, 0};  // body, specific force, clipped
  Eigen::Vector3d gyro{0, 0, 0};   // body rad/s
  double baro_altitude = 0.0;
  bool baro_valid = false;
  double range_distance = 0.0;
  bool range_valid = false;
  bool vio_valid = false;          // a fresh VIO sample is present
  Eigen::Vector3d vio_position{0, 0, 0};
  double vio_yaw = 0.0;
  double vio_variance_xy = 0.0;    // running max of x/y window variance
};

/// Sliding-window population variance of the VIO's horizontal position
/// estimates; reports the larger of the two axes. Needs at least two samples.
class VioVarianceTracker {
 public:
  explicit VioVarianceTracker(double window = 1.0) : window_(window) {}

  void add(double t, double x, double y);
  double value() const;  // +inf until two samples are in the window
  size_t count() const { return samples_.size(); }
  void reset() { samples_.clear(); }

 private:
  struct Sample { double t, x, y; };
  double window_;
  std::deque<Sample> samples_;
};

/// Owns one RNG stream per simulation instance. VIO output is gated: no pose
/// is emitted until enable_vio() is called by the autonomy layer.
class SensorSuite {
 public:
  explicit SensorSuite(SensorConfig cfg);

  /// accel_world is the kinematic acceleration of the vehicle (gravity not
  /// included); the emulated IMU reports specific force.
  SensorFrame sample(const RigidBodyState& truth,
                     const Eigen::Vector3d& accel_world, double t,
                     double launch_time);

  void enable_vio(bool on);
  bool vio_enabled() const { return vio_enabled_; }
  const VioVarianceTracker& tracker() const { return tracker_; }

 private:
  double gauss(double std);

  SensorConfig cfg_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_normal_{0.0, 1.0};
  bool vio_enabled_ = false;
  double last_vio_time_ = -1e18;
  VioVarianceTracker tracker_;
};

double yaw_of(const Eigen::Quaterniond& q);

}  // namespace tubesim
