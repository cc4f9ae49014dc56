#include "tubesim/scaling.hpp"

#include <cmath>
#include <stdexcept>

namespace tubesim {

double froude_number(double speed, double length) {
  if (!(length > 0.0)) {
    throw std::invalid_argument("froude_number: length must be > 0");
  }
  return speed / std::sqrt(kGravity * length);
}

std::vector<TrajectoryPoint> scale_trajectory(
    const std::vector<TrajectoryPoint>& traj, const ScaleMap& map) {
  if (!(map.length_factor > 0.0)) {
    throw std::invalid_argument("scale factor must be > 0");
  }
  std::vector<TrajectoryPoint> out;
  out.reserve(traj.size());
  for (const auto& p : traj) {
    TrajectoryPoint q;
    q.time = p.time * map.time_factor();
    q.position = p.position * map.length_factor;
    q.velocity = p.velocity * map.velocity_factor();
    out.push_back(q);
  }
  return out;
}

ScaledConfigs subscale_config(const VehicleConfig& full, const AeroConfig& aero,
                              double lambda,
                              std::optional<double> mass_override) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  const double l = lambda;
  const double l2 = l * l;
  const double l3 = l2 * l;

  ScaledConfigs out{full, aero};
  VehicleConfig& v = out.vehicle;
  v.total_mass = mass_override ? *mass_override : full.total_mass / l3;
  const double mass_ratio = v.total_mass / (full.total_mass / l3);
  v.nose_battery_mass = full.nose_battery_mass / l3 * mass_ratio;
  v.arm_mass = full.arm_mass / l3 * mass_ratio;
  v.fin_mass = full.fin_mass / l3 * mass_ratio;
  v.body_length = full.body_length / l;
  v.folded_diameter = full.folded_diameter / l;
  v.unfolded_diameter = full.unfolded_diameter / l;
  v.arm_length = full.arm_length / l;
  v.fin_length = full.fin_length / l;
  v.battery_station = full.battery_station / l;
  v.body_station = full.body_station / l;
  v.arm_hinge_station = full.arm_hinge_station / l;
  v.fin_hinge_station = full.fin_hinge_station / l;
  v.hull_radius = full.hull_radius / l;
  v.body_lump_length = full.body_lump_length / l;
  // Torque ~ weight x length; damping follows torque / hinge rate.
  v.hinge_torque_closed = full.hinge_torque_closed / (l3 * l) * mass_ratio;
  v.hinge_torque_open = full.hinge_torque_open / (l3 * l) * mass_ratio;
  v.hinge_damping = full.hinge_damping / (l3 * std::sqrt(l)) * mass_ratio;
  v.max_total_thrust = full.max_total_thrust / l3 * mass_ratio;

  AeroConfig& a = out.aero;
  a.reference_area = aero.reference_area / l2;
  a.fin_area = aero.fin_area / l2;
  a.fin_span = aero.fin_span / l;
  a.deployed_extra_area = aero.deployed_extra_area / l2;
  a.body_ac_from_nose = aero.body_ac_from_nose / l;
  a.fin_ac_from_nose = aero.fin_ac_from_nose / l;
  // N*m*s^2 damping scales like rho * length^5.
  a.yaw_damping_coeff = aero.yaw_damping_coeff / (l2 * l3);
  // The autorotation moment arm-volume scales like length^3.
  a.autorotation_coeff = aero.autorotation_coeff / l3;
  return out;
}

LauncherConfig subscale_launcher(const LauncherConfig& full, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  const double l = lambda;
  LauncherConfig out = full;
  out.tube_length = full.tube_length / l;
  out.tube_bore = full.tube_bore / l;
  // Chamber volume shrinks by lambda^2, not lambda^3: with the gauge
  // pressure reduced by lambda, a pure geometric chamber would make the
  // adiabatic work bound bite before the end of the stroke and break the
  // sqrt(lambda) exit-speed rule. The chamber is ground equipment, so the
  // extra headroom costs the scaled model nothing.
  out.chamber_volume = full.chamber_volume / (l * l);
  out.carriage_mass = full.carriage_mass / (l * l * l);
  out.chamber_pressure =
      full.ambient_pressure + (full.chamber_pressure - full.ambient_pressure) / l;
  out.friction_force = full.friction_force / (l * l * l);
  return out;
}

}  // namespace tubesim
