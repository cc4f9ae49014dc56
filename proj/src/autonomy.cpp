#include "tubesim/autonomy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubesim {

const char* to_string(AutonomyPhase phase) {
  switch (phase) {
    case AutonomyPhase::InTube: return "InTube";
    case AutonomyPhase::BallisticPassive: return "BallisticPassive";
    case AutonomyPhase::AttitudeStab: return "AttitudeStab";
    case AutonomyPhase::AltitudeClosed: return "AltitudeClosed";
    case AutonomyPhase::DriftWait: return "DriftWait";
    case AutonomyPhase::VioInit: return "VioInit";
    case AutonomyPhase::PositionControl: return "PositionControl";
    case AutonomyPhase::FailTumble: return "FailTumble";
  }
  return "?";
}

std::optional<AutonomyPhase> phase_from_string(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(AutonomyPhase::FailTumble); ++i) {
    const auto p = static_cast<AutonomyPhase>(i);
    if (name == to_string(p)) return p;
  }
  return std::nullopt;
}

bool legal_transition(AutonomyPhase from, AutonomyPhase to) {
  if (from == to) return true;
  if (to == AutonomyPhase::FailTumble) {
    // Only powered phases can fail into a tumble.
    return from >= AutonomyPhase::AttitudeStab &&
           from < AutonomyPhase::FailTumble;
  }
  return static_cast<int>(to) == static_cast<int>(from) + 1 &&
         to <= AutonomyPhase::PositionControl;
}

void AutonomyConfig::validate() const {
  if (!(control_rate > 0.0)) throw std::invalid_argument("control_rate must be > 0");
  if (drift_wait < 0.0 || spool_time < 0.0 || vio_dropout <= 0.0) {
    throw std::invalid_argument("autonomy timing values out of range");
  }
  if (!(vio_var_threshold > 0.0)) {
    throw std::invalid_argument("vio_var_threshold must be > 0");
  }
  if (!(open_loop_bias > 0.0)) {
    throw std::invalid_argument("open_loop_bias must be > 0");
  }
}

Eigen::Vector3d attitude_torque(const Eigen::Quaterniond& attitude,
                                const Eigen::Vector3d& rates,
                                const Eigen::Quaterniond& target,
                                const Eigen::Vector3d& inertia,
                                const ControllerGains& gains) {
  Eigen::Quaterniond qe = attitude.conjugate() * target;
  if (qe.w() < 0.0) qe.coeffs() *= -1.0;
  const Eigen::AngleAxisd aa(qe);
  const Eigen::Vector3d err = aa.angle() * aa.axis();  // body-frame rotation to target
  Eigen::Vector3d rate_des(gains.att_kq * err.x(), gains.att_kq * err.y(),
                           gains.att_kq_yaw * err.z());
  const Eigen::Vector3d accel_des = gains.att_kw * (rate_des - rates);
  return inertia.cwiseProduct(accel_des);
}

void hex_rotor_geometry(int i, double arm_radius, double& x, double& y,
                        double& spin) {
  const double psi = (30.0 + 60.0 * i) * M_PI / 180.0;
  x = arm_radius * std::cos(psi);
  y = arm_radius * std::sin(psi);
  spin = (i % 2 == 0) ? 1.0 : -1.0;
}

std::array<double, 6> mix_hexacopter(double collective,
                                     const Eigen::Vector3d& torque,
                                     double arm_radius, double max_total,
                                     double yaw_moment_coeff) {
  // Roll torque = sum t_i*y_i, pitch = -sum t_i*x_i, yaw = sum s_i*k*t_i.
  // For the symmetric X layout the least-squares allocation is diagonal.
  const double r2 = arm_radius * arm_radius;
  const double a = torque.x() / (3.0 * r2);
  const double b = -torque.y() / (3.0 * r2);
  const double c = torque.z() / (6.0 * yaw_moment_coeff);
  std::array<double, 6> out{};
  const double per_rotor_max = max_total / 6.0;
  for (int i = 0; i < 6; ++i) {
    double x, y, s;
    hex_rotor_geometry(i, arm_radius, x, y, s);
    const double t = collective / 6.0 + a * y + b * x + c * s;
    out[i] = std::clamp(t, 0.0, per_rotor_max);
  }
  return out;
}

Wrench rotor_wrench(const std::array<double, 6>& thrust, double arm_radius,
                    double yaw_moment_coeff) {
  Wrench w;
  for (int i = 0; i < 6; ++i) {
    double x, y, s;
    hex_rotor_geometry(i, arm_radius, x, y, s);
    w.force.z() += thrust[i];
    w.moment.x() += thrust[i] * y;
    w.moment.y() -= thrust[i] * x;
    w.moment.z() += s * yaw_moment_coeff * thrust[i];
  }
  return w;
}

double AltitudeController::update(double altitude, double climb_rate,
                                  bool baro_valid, const ControllerSetpoint& sp,
                                  double hover, double max_total, double bias,
                                  const ControllerGains& gains, double dt) {
  if (!baro_valid) {
    return std::min(bias * hover, max_total);
  }
  const double err = sp.altitude - altitude;
  integral_ += gains.alt_ki * err * dt;
  integral_ = std::clamp(integral_, -0.3 * hover, 0.3 * hover);
  const double out = hover + gains.alt_kp * err + integral_ +
                     gains.alt_kd * (sp.climb_rate - climb_rate);
  return std::clamp(out, 0.0, max_total);
}

Eigen::Quaterniond PositionController::update(const Eigen::Vector2d& position,
                                              const Eigen::Vector2d& velocity,
                                              const Eigen::Vector2d& target,
                                              double yaw_target,
                                              const ControllerGains& gains,
                                              double dt) {
  const Eigen::Vector2d err = target - position;
  integral_ += gains.pos_ki * err * dt;
  const double int_limit = kGravity * std::tan(0.5 * gains.tilt_limit);
  if (integral_.norm() > int_limit) integral_ *= int_limit / integral_.norm();
  const Eigen::Vector2d accel = gains.pos_kp * err + integral_ - gains.pos_kd * velocity;
  double pitch = accel.x() / kGravity;  // tilt about +y accelerates +x
  double roll = -accel.y() / kGravity;
  pitch = std::clamp(pitch, -gains.tilt_limit, gains.tilt_limit);
  roll = std::clamp(roll, -gains.tilt_limit, gains.tilt_limit);
  return Eigen::Quaterniond(Eigen::AngleAxisd(yaw_target, Eigen::Vector3d::UnitZ())) *
         Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
         Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX());
}

AutonomyPipeline::AutonomyPipeline(VehicleConfig vehicle, AutonomyConfig cfg,
                                   double launch_time)
    : vehicle_(std::move(vehicle)), cfg_(cfg), launch_time_(launch_time) {
  vehicle_.validate();
  cfg_.validate();
  hover_ = vehicle_.total_mass * kGravity;
  inertia_ =
      mass_properties(vehicle_,
                      DeploymentState::deployed(vehicle_.arm_count,
                                                vehicle_.fin_count))
          .inertia_diag;
}

void AutonomyPipeline::change_phase(AutonomyPhase to, double t,
                                    const std::string& guard) {
  log_.push_back({t, phase_, to, guard});
  phase_ = to;
}

double AutonomyPipeline::spool_scale(double t) const {
  if (motors_on_time_ < 0.0) return 0.0;
  return 1.0 - std::exp(-(t - motors_on_time_) / cfg_.spool_tau);
}

AutonomyPipeline::Output AutonomyPipeline::update(const SensorFrame& frame,
                                                  bool arms_latched,
                                                  bool apogee_seen, bool tumble,
                                                  double t) {
  const double dt =
      last_update_time_ < 0.0 ? 1.0 / cfg_.control_rate : t - last_update_time_;

  // --- estimation ---
  if (last_update_time_ >= 0.0 && dt > 0.0) {
    const Eigen::Vector3d dtheta = frame.gyro * dt;
    const double ang = dtheta.norm();
    if (ang > 1e-12) {
      q_est_ = q_est_ * Eigen::Quaterniond(
                            Eigen::AngleAxisd(ang, dtheta / ang));
      q_est_.normalize();
    }
  }
  if (frame.baro_valid) {
    if (!alt_init_) {
      alt_filt_ = frame.baro_altitude;
      alt_init_ = true;
    }
    const double tau = 0.15;
    alt_filt_ += (frame.baro_altitude - alt_filt_) * dt / (tau + dt);
    alt_hist_.emplace_back(t, alt_filt_);
    while (!alt_hist_.empty() && alt_hist_.front().first < t - 0.45) {
      alt_hist_.pop_front();
    }
    const double span = t - alt_hist_.front().first;
    if (span > 0.1) {
      vz_est_ = (alt_filt_ - alt_hist_.front().second) / span;
    }
  }
  if (frame.vio_valid) {
    if (have_vio_prev_ && frame.time > vio_prev_time_) {
      const Eigen::Vector3d dv =
          (frame.vio_position - vio_prev_) / (frame.time - vio_prev_time_);
      const double tau = 0.2;
      const double dtv = frame.time - vio_prev_time_;
      vio_vel_ += (dv.head<2>() - vio_vel_) * dtv / (tau + dtv);
    }
    vio_prev_ = frame.vio_position;
    vio_prev_time_ = frame.time;
    have_vio_prev_ = true;
    last_vio_seen_ = t;
  }
  last_update_time_ = t;

  // --- phase transitions ---
  const bool powered = phase_ >= AutonomyPhase::AttitudeStab &&
                       phase_ != AutonomyPhase::FailTumble;
  if (tumble && powered) {
    change_phase(AutonomyPhase::FailTumble, t, "tumble detected");
  }
  switch (phase_) {
    case AutonomyPhase::InTube:
      if (frame.range_valid && frame.range_distance > cfg_.tube_clearance) {
        change_phase(AutonomyPhase::BallisticPassive, t,
                     "rangefinder cleared launch tube");
      }
      break;
    case AutonomyPhase::BallisticPassive:
      if (apogee_seen && !spool_deadline_missed_) {
        spool_deadline_missed_ = true;  // apogee passed with motors still off
      }
      if (arms_latched && cfg_.enabled) {
        motors_on_time_ = t;
        spool_done_time_ = t + cfg_.spool_time;
        change_phase(AutonomyPhase::AttitudeStab, t, "arms latched, motors on");
      }
      break;
    case AutonomyPhase::AttitudeStab:
      if (frame.baro_valid) {
        setpoint_.altitude = frame.baro_altitude;
        setpoint_.climb_rate = 0.0;
        setpoint_.altitude_active = true;
        alt_ctrl_.reset();
        change_phase(AutonomyPhase::AltitudeClosed, t, "barometer recovered");
      }
      break;
    case AutonomyPhase::AltitudeClosed:
      // Altitude hold engaged; the drift wait starts immediately.
      change_phase(AutonomyPhase::DriftWait, t, "altitude hold engaged");
      break;
    case AutonomyPhase::DriftWait:
      if (t - motors_on_time_ >= cfg_.drift_wait &&
          std::abs(frame.gyro.x()) < cfg_.rate_eps &&
          std::abs(frame.gyro.y()) < cfg_.rate_eps &&
          std::abs(vz_est_) < cfg_.vz_eps) {
        change_phase(AutonomyPhase::VioInit, t,
                     "drift window elapsed, rates and climb near zero");
      }
      break;
    case AutonomyPhase::VioInit:
      if (frame.vio_variance_xy < cfg_.vio_var_threshold) {
        setpoint_.position = frame.vio_position.head<2>();
        setpoint_.position_active = true;
        pos_ctrl_.reset();
        vio_regate_ = false;
        change_phase(AutonomyPhase::PositionControl, t,
                     "VIO variance below threshold");
      }
      break;
    case AutonomyPhase::PositionControl:
      if (t - last_vio_seen_ > cfg_.vio_dropout) {
        vio_regate_ = true;  // fall back to drift-hold until VIO re-converges
      } else if (vio_regate_ &&
                 frame.vio_variance_xy < cfg_.vio_var_threshold) {
        setpoint_.position = frame.vio_position.head<2>();
        vio_regate_ = false;
      }
      break;
    case AutonomyPhase::FailTumble:
      break;
  }

  // --- control ---
  Output out;
  out.vio_enable = phase_ == AutonomyPhase::VioInit ||
                   phase_ == AutonomyPhase::PositionControl;
  if (phase_ < AutonomyPhase::AttitudeStab ||
      phase_ == AutonomyPhase::FailTumble) {
    return out;  // motors never commanded while passive or failed
  }
  out.spooled = t >= spool_done_time_;

  Eigen::Quaterniond q_target = Eigen::Quaterniond::Identity();
  if (phase_ == AutonomyPhase::PositionControl && !vio_regate_ &&
      have_vio_prev_) {
    q_target = pos_ctrl_.update(vio_prev_.head<2>(), vio_vel_,
                                setpoint_.position, 0.0, cfg_.gains, dt);
  }
  setpoint_.attitude = q_target;
  setpoint_.open_loop_throttle =
      cfg_.open_loop_bias * hover_ / vehicle_.max_total_thrust;

  const bool alt_closed = setpoint_.altitude_active && frame.baro_valid;
  double collective = alt_ctrl_.update(alt_filt_, vz_est_, alt_closed,
                                       setpoint_, hover_,
                                       vehicle_.max_total_thrust,
                                       cfg_.open_loop_bias, cfg_.gains, dt);
  collective *= spool_scale(t);

  const Eigen::Vector3d torque =
      attitude_torque(q_est_, frame.gyro, q_target, inertia_, cfg_.gains);
  out.rotor_thrust =
      mix_hexacopter(collective, torque, vehicle_.rotor_arm_radius(),
                     vehicle_.max_total_thrust, cfg_.gains.yaw_moment_coeff);
  for (double th : out.rotor_thrust) out.total_thrust += th;
  return out;
}

}  // namespace tubesim
