#include "tubesim/launcher.hpp"

#include <algorithm>
#include <cmath>

namespace tubesim {

void LauncherConfig::validate() const {
  // Sub-ambient chamber pressure is a launch failure at run time, not a
  // config error; only physically meaningless values are rejected here.
  if (chamber_pressure < 0.0 || !(ambient_pressure > 0.0)) {
    throw std::invalid_argument("pressures must be non-negative");
  }
  if (!(chamber_volume > 0.0)) {
    throw std::invalid_argument("chamber_volume must be > 0");
  }
  if (!(gas_gamma > 1.0)) throw std::invalid_argument("gas_gamma must be > 1");
  if (!(tube_length > 0.0)) throw std::invalid_argument("tube_length must be > 0");
  if (!(tube_bore > 0.0)) throw std::invalid_argument("tube_bore must be > 0");
  if (carriage_mass < 0.0) throw std::invalid_argument("carriage_mass must be >= 0");
  // efficiency = 0 is allowed and produces a launch failure at run time.
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("efficiency must be in [0,1]");
  }
  if (friction_force < 0.0) {
    throw std::invalid_argument("friction_force must be >= 0");
  }
}

double adiabatic_energy(const LauncherConfig& cfg) {
  cfg.validate();
  const double p1 = cfg.chamber_pressure;
  const double p2 = cfg.ambient_pressure;
  const double v1 = cfg.chamber_volume;
  const double g = cfg.gas_gamma;
  if (p1 <= p2) return 0.0;
  const double v2 = v1 * std::pow(p1 / p2, 1.0 / g);
  const double expansion_work = (p1 * v1 - p2 * v2) / (g - 1.0);
  const double back_work = p2 * (v2 - v1);
  return expansion_work - back_work;
}

ExitState simulate_tube_phase(const LauncherConfig& cfg,
                              const VehicleConfig& vehicle) {
  cfg.validate();
  vehicle.validate();
  if (vehicle.folded_diameter > cfg.tube_bore + 1e-9) {
    throw std::invalid_argument("folded vehicle does not fit the tube bore");
  }

  const double total_mass = vehicle.total_mass + cfg.carriage_mass;
  const double stroke = cfg.tube_length;

  // Gas work over the stroke, capped by the adiabatic bound of the chamber.
  const double dp = cfg.chamber_pressure - cfg.ambient_pressure;
  const double gas_work =
      std::min(std::max(dp, 0.0) * cfg.bore_area() * stroke,
               adiabatic_energy(cfg));
  const double gas_force = cfg.efficiency * gas_work / stroke;

  const double gravity_force =
      total_mass * kGravity * std::sin(cfg.launch_elevation);
  const double net_force = gas_force - gravity_force - cfg.friction_force;
  const double accel = net_force / total_mass;
  if (accel <= 0.0) {
    throw LaunchFailure("launch failure: insufficient chamber pressure");
  }

  ExitState out;
  out.peak_acceleration = accel;
  out.exit_speed = std::sqrt(2.0 * accel * stroke);
  out.time_in_tube = out.exit_speed / accel;
  const Eigen::Vector3d axis(std::cos(cfg.launch_elevation), 0.0,
                             std::sin(cfg.launch_elevation));
  out.exit_position = axis * stroke;
  out.exit_velocity = axis * out.exit_speed;
  return out;
}

double apogee_bound(const ExitState& exit_state, double /*vehicle_mass*/) {
  const double v = exit_state.exit_speed;
  return v * v / (2.0 * kGravity);
}

}  // namespace tubesim
