#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "tubesim/sensors.hpp"
#include "tubesim/vehicle.hpp"

namespace tubesim {

enum class AutonomyPhase {
  InTube,
  BallisticPassive,
  AttitudeStab,
  AltitudeClosed,
  DriftWait,
  VioInit,
  PositionControl,
  FailTumble,
};

const char* to_string(AutonomyPhase phase);
std::optional<AutonomyPhase> phase_from_string(const std::string& name);

/// Returns true if `to` is a legal successor of `from` (self-loops allowed).
bool legal_transition(AutonomyPhase from, AutonomyPhase to);

struct ControllerGains {
  double att_kq = 8.0;        // 1/s, attitude angle to rate
  double att_kq_yaw = 3.0;    // 1/s
  double att_kw = 20.0;       // 1/s, rate error to angular accel
  double yaw_moment_coeff = 0.016;  // m, rotor drag torque per N of thrust
  double alt_kp = 9.0;        // N per m
  double alt_ki = 1.0;        // N per m*s
  double alt_kd = 7.0;        // N per m/s
  double pos_kp = 2.0;        // m/s^2 per m
  double pos_ki = 0.15;       // m/s^2 per m*s
  double pos_kd = 2.8;        // m/s^2 per m/s
  double tilt_limit = 15.0 * M_PI / 180.0;
};

struct AutonomyConfig {
  bool enabled = true;
  double control_rate = 250.0;       // Hz
  double tube_clearance = 1.0;       // m of rangefinder distance
  double drift_wait = 10.0;          // s after motors-on before VIO init
  double rate_eps = 0.2;             // rad/s, "near-zero" pitch/roll rate
  double vz_eps = 0.3;               // m/s, "near-zero" vertical speed
  double vio_var_threshold = 0.05;   // m^2
  double open_loop_bias = 1.1;       // x hover when baro is out
  double spool_time = 0.3;           // s to full thrust
  double spool_tau = 0.075;          // s, first-order ramp constant
  double vio_dropout = 0.5;          // s without VIO before re-gating
  ControllerGains gains;

  void validate() const;
};

/// Active setpoints; which fields matter depends on the phase.
struct ControllerSetpoint {
  Eigen::Quaterniond attitude{1, 0, 0, 0};
  double climb_rate = 0.0;        // m/s
  double altitude = 0.0;          // m
  Eigen::Vector2d position{0, 0}; // m, horizontal
  double open_loop_throttle = 0.0;  // fraction of max thrust
  bool altitude_active = false;
  bool position_active = false;
};

// ---- Controllers (pure pieces, exposed for direct testing) ----

/// Quaternion-error P + rate-P cascade producing body torques, scaled by the
/// per-axis inertia.
Eigen::Vector3d attitude_torque(const Eigen::Quaterniond& attitude,
                                const Eigen::Vector3d& rates,
                                const Eigen::Quaterniond& target,
                                const Eigen::Vector3d& inertia,
                                const ControllerGains& gains);

/// Hexacopter X allocation: collective plus roll/pitch/yaw torques mapped to
/// six rotors, each clamped to [0, max_total/6].
std::array<double, 6> mix_hexacopter(double collective,
                                     const Eigen::Vector3d& torque,
                                     double arm_radius, double max_total,
                                     double yaw_moment_coeff);

/// Rotor x/y position and spin direction for rotor i of the X layout.
void hex_rotor_geometry(int i, double arm_radius, double& x, double& y,
                        double& spin);

/// Wrench produced by a set of rotor thrusts (body frame, thrust along +z).
Wrench rotor_wrench(const std::array<double, 6>& thrust, double arm_radius,
                    double yaw_moment_coeff);

/// PI on altitude + D on climb rate around the hover feed-forward. Falls back
/// to the open-loop biased throttle when the barometer is out.
class AltitudeController {
 public:
  double update(double altitude, double climb_rate, bool baro_valid,
                const ControllerSetpoint& sp, double hover, double max_total,
                double bias, const ControllerGains& gains, double dt);
  void reset() { integral_ = 0.0; }

 private:
  double integral_ = 0.0;
};

/// Horizontal PD(+I) on position mapped to a tilt attitude setpoint,
/// clamped to the tilt limit.
class PositionController {
 public:
  Eigen::Quaterniond update(const Eigen::Vector2d& position,
                            const Eigen::Vector2d& velocity,
                            const Eigen::Vector2d& target, double yaw_target,
                            const ControllerGains& gains, double dt);
  void reset() { integral_.setZero(); }

 private:
  Eigen::Vector2d integral_{0, 0};
};

struct PhaseChange {
  double time;
  AutonomyPhase from;
  AutonomyPhase to;
  std::string guard;
};

/// The passive-to-active pipeline: finite-state machine plus the controllers
/// each phase runs. Attitude is estimated by integrating the gyro from the
/// known in-tube orientation; altitude and climb rate come from a filtered
/// barometer.
class AutonomyPipeline {
 public:
  struct Output {
    std::array<double, 6> rotor_thrust{};
    double total_thrust = 0.0;
    bool vio_enable = false;
    bool spooled = false;
  };

  AutonomyPipeline(VehicleConfig vehicle, AutonomyConfig cfg,
                   double launch_time);

  Output update(const SensorFrame& frame, bool arms_latched, bool apogee_seen,
                bool tumble, double t);

  AutonomyPhase phase() const { return phase_; }
  const std::vector<PhaseChange>& phase_log() const { return log_; }
  bool spool_deadline_missed() const { return spool_deadline_missed_; }
  double motors_on_time() const { return motors_on_time_; }
  double spool_done_time() const { return spool_done_time_; }

 private:
  void change_phase(AutonomyPhase to, double t, const std::string& guard);
  double spool_scale(double t) const;

  VehicleConfig vehicle_;
  AutonomyConfig cfg_;
  double launch_time_;
  double hover_;
  Eigen::Vector3d inertia_;

  AutonomyPhase phase_ = AutonomyPhase::InTube;
  std::vector<PhaseChange> log_;
  double motors_on_time_ = -1.0;
  double spool_done_time_ = -1.0;
  bool spool_deadline_missed_ = false;

  // estimation
  Eigen::Quaterniond q_est_{1, 0, 0, 0};
  double last_update_time_ = -1.0;
  double alt_filt_ = 0.0;
  bool alt_init_ = false;
  std::deque<std::pair<double, double>> alt_hist_;
  double vz_est_ = 0.0;
  bool have_vio_prev_ = false;
  Eigen::Vector3d vio_prev_{0, 0, 0};
  double vio_prev_time_ = 0.0;
  Eigen::Vector2d vio_vel_{0, 0};
  double last_vio_seen_ = -1.0;
  bool vio_regate_ = false;

  ControllerSetpoint setpoint_;
  AltitudeController alt_ctrl_;
  PositionController pos_ctrl_;
};

}  // namespace tubesim
