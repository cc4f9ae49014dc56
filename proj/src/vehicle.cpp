#include "tubesim/vehicle.hpp"

#include <algorithm>
#include <stdexcept>

namespace tubesim {

namespace {

void check_angle(double angle, const char* what) {
  if (!(angle >= 0.0 && angle <= kHingeOpen + 1e-12)) {
    throw std::invalid_argument(std::string(what) +
                                " hinge angle out of [0, pi/2]");
  }
}

}  // namespace

DeploymentState DeploymentState::folded(int arm_count, int fin_count) {
  DeploymentState d;
  d.arm_angles.assign(arm_count, 0.0);
  d.fin_angles.assign(fin_count, 0.0);
  d.arm_latched.assign(arm_count, false);
  d.fin_settled.assign(fin_count, false);
  return d;
}

DeploymentState DeploymentState::deployed(int arm_count, int fin_count) {
  DeploymentState d;
  d.arm_angles.assign(arm_count, kHingeOpen);
  d.fin_angles.assign(fin_count, kHingeOpen);
  d.arm_latched.assign(arm_count, true);
  d.fin_settled.assign(fin_count, true);
  return d;
}

bool DeploymentState::all_arms_latched() const {
  for (bool b : arm_latched)
    if (!b) return false;
  return !arm_latched.empty();
}

bool DeploymentState::all_fins_settled() const {
  for (bool b : fin_settled)
    if (!b) return false;
  return !fin_settled.empty();
}

double DeploymentState::mean_fin_sin() const {
  if (fin_angles.empty()) return 0.0;
  double s = 0.0;
  for (double a : fin_angles) s += std::sin(a);
  return s / static_cast<double>(fin_angles.size());
}

double DeploymentState::mean_arm_sin() const {
  if (arm_angles.empty()) return 0.0;
  double s = 0.0;
  for (double a : arm_angles) s += std::sin(a);
  return s / static_cast<double>(arm_angles.size());
}

void DeploymentState::validate() const {
  if (arm_angles.size() != arm_latched.size() ||
      fin_angles.size() != fin_settled.size()) {
    throw std::invalid_argument("deployment vectors have mismatched sizes");
  }
  for (size_t i = 0; i < arm_angles.size(); ++i) {
    check_angle(arm_angles[i], "arm");
    if (arm_latched[i] && std::abs(arm_angles[i] - kHingeOpen) > 1e-9) {
      throw std::invalid_argument("latched arm must be fully open");
    }
  }
  for (double a : fin_angles) check_angle(a, "fin");
}

double VehicleConfig::central_body_mass() const {
  return total_mass - nose_battery_mass - arm_count * arm_mass -
         fin_count * fin_mass;
}

void VehicleConfig::validate() const {
  if (!(total_mass > 0.0)) throw std::invalid_argument("total_mass must be > 0");
  if (!(body_length > 0.0)) throw std::invalid_argument("body_length must be > 0");
  if (!(folded_diameter < unfolded_diameter)) {
    throw std::invalid_argument("folded_diameter must be < unfolded_diameter");
  }
  if (arm_count < 0 || fin_count < 0) {
    throw std::invalid_argument("negative arm/fin count");
  }
  if (nose_battery_mass < 0.0 || arm_mass < 0.0 || fin_mass < 0.0) {
    throw std::invalid_argument("negative component mass");
  }
  if (central_body_mass() < 0.0) {
    throw std::invalid_argument("component masses exceed total_mass");
  }
  if (!(hover_throttle_fraction > 0.0 && hover_throttle_fraction < 1.0)) {
    throw std::invalid_argument("hover_throttle_fraction must be in (0,1)");
  }
  if (hover_throttle_fraction * max_total_thrust <
      total_mass * kGravity - 1e-6) {
    throw std::invalid_argument("hover is not achievable at the configured "
                                "throttle fraction and max thrust");
  }
  if (!(hinge_travel > 0.0)) throw std::invalid_argument("hinge_travel must be > 0");
  if (!(hinge_damping > 0.0)) throw std::invalid_argument("hinge_damping must be > 0");
  if (hinge_torque_closed <= 0.0 || hinge_torque_open <= 0.0) {
    throw std::invalid_argument("hinge torques must be > 0");
  }
}

namespace {

struct Lump {
  double mass;
  double station;  // m from nose
  double radial;   // m from body axis (ring-averaged for grouped points)
};

// Builds the movable point-mass list for the current hinge angles. A folded
// appendage stows tailward along the hull; an open one sits radial at its
// hinge station.
std::vector<Lump> movable_lumps(const VehicleConfig& c,
                                const DeploymentState& d) {
  std::vector<Lump> lumps;
  for (double a : d.arm_angles) {
    const double half = 0.5 * c.arm_length;
    lumps.push_back({c.arm_mass, c.arm_hinge_station + half * std::cos(a),
                     c.hull_radius + half * std::sin(a)});
  }
  for (double a : d.fin_angles) {
    const double half = 0.5 * c.fin_length;
    lumps.push_back({c.fin_mass, c.fin_hinge_station + half * std::cos(a),
                     c.hull_radius + half * std::sin(a)});
  }
  return lumps;
}

}  // namespace

MassProperties mass_properties(const VehicleConfig& config,
                               const DeploymentState& deploy) {
  config.validate();
  deploy.validate();
  if (static_cast<int>(deploy.arm_angles.size()) != config.arm_count ||
      static_cast<int>(deploy.fin_angles.size()) != config.fin_count) {
    throw std::invalid_argument("deployment state does not match arm/fin counts");
  }

  auto lumps = movable_lumps(config, deploy);
  lumps.push_back({config.nose_battery_mass, config.battery_station, 0.0});
  const double m_body = config.central_body_mass();
  lumps.push_back({m_body, config.body_station, 0.0});

  double mass_sum = 0.0;
  double moment = 0.0;
  for (const auto& l : lumps) {
    mass_sum += l.mass;
    moment += l.mass * l.station;
  }
  const double com = moment / mass_sum;

  // Axial inertia: ring formula m*r^2 per point, 1/2 m r^2 for the hull lump.
  // Transverse: m*(d^2 + r^2/2) per point (azimuth-averaged), plus the hull
  // cylinder's own term.
  double axial = 0.5 * m_body * config.hull_radius * config.hull_radius;
  double transverse = 0.0;
  for (const auto& l : lumps) {
    const double d = l.station - com;
    axial += l.mass * l.radial * l.radial;
    transverse += l.mass * (d * d + 0.5 * l.radial * l.radial);
  }
  transverse += m_body / 12.0 *
                (3.0 * config.hull_radius * config.hull_radius +
                 config.body_lump_length * config.body_lump_length);
  // The hull lump's own axial term was added above; remove its double-counted
  // point contribution (radial = 0, so nothing to remove for transverse).

  MassProperties mp;
  mp.com_from_nose = com;
  mp.inertia_diag = Eigen::Vector3d(transverse, transverse, axial);
  if (!(mp.com_from_nose > 0.0 && mp.com_from_nose < config.body_length)) {
    throw std::runtime_error("computed COM falls outside the body");
  }
  return mp;
}

double hover_thrust(const VehicleConfig& config) {
  config.validate();
  return config.total_mass * kGravity;
}

double implied_max_thrust(const VehicleConfig& config) {
  config.validate();
  return config.total_mass * kGravity / config.hover_throttle_fraction;
}

double hinge_torque(const VehicleConfig& config, double angle) {
  const double f = std::clamp(angle / config.hinge_travel, 0.0, 1.0);
  return config.hinge_torque_closed +
         f * (config.hinge_torque_open - config.hinge_torque_closed);
}

}  // namespace tubesim
