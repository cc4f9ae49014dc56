#pragma once

#include <Eigen/Core>

#include <cmath>
#include <vector>

namespace tubesim {

inline constexpr double kGravity = 9.81;       // m/s^2
inline constexpr double kHingeOpen = M_PI_2;   // rad, fully deployed hinge angle

/// Hinge angles and latch status for the fold-out arms and fins.
/// Angle convention: 0 = folded parallel to the body axis (stowed tailward),
/// pi/2 = fully open, radial.
struct DeploymentState {
  std::vector<double> arm_angles;
  std::vector<double> fin_angles;
  std::vector<bool> arm_latched;
  std::vector<bool> fin_settled;

  static DeploymentState folded(int arm_count, int fin_count);
  static DeploymentState deployed(int arm_count, int fin_count);

  bool all_arms_latched() const;
  bool all_fins_settled() const;
  double mean_fin_sin() const;
  double mean_arm_sin() const;

  void validate() const;
};

/// Full physical description of the vehicle. Lengths in m, masses in kg,
/// stations measured from the nose along the body axis.
///
/// The lumped-mass split (battery / central body / per-arm / per-fin) and the
/// station values are calibration defaults; override them in the scenario
/// file if better data is available.
struct VehicleConfig {
  double total_mass = 3.3;
  double body_length = 0.79;
  double folded_diameter = 0.15;
  double unfolded_diameter = 0.58;
  double nose_battery_mass = 0.58;
  int arm_count = 6;
  double arm_mass = 0.12;        // per arm
  double arm_length = 0.21;
  int fin_count = 3;
  double fin_mass = 0.08;        // per fin
  double fin_length = 0.30;
  double hinge_torque_closed = 1.04;  // N*m at angle 0
  double hinge_torque_open = 0.52;    // N*m at full travel
  double hinge_travel = kHingeOpen;   // rad
  double hinge_damping = 0.038;       // N*m*s/rad, tuned for ~80 ms latch
  double max_total_thrust = 57.81;    // N
  double hover_throttle_fraction = 0.56;

  // Lumped-mass stations (from nose) and hull geometry.
  double battery_station = 0.06;
  double body_station = 0.2175;
  double arm_hinge_station = 0.32;
  double fin_hinge_station = 0.60;
  double hull_radius = 0.075;
  double body_lump_length = 0.60;  // length of the central cylinder lump

  double central_body_mass() const;
  double rotor_arm_radius() const { return hull_radius + arm_length; }

  void validate() const;
};

/// Center of mass and principal inertia at the current deployment state.
/// Body axes: z along the long axis toward the nose, x/y transverse.
struct MassProperties {
  double com_from_nose = 0.0;          // m
  Eigen::Vector3d inertia_diag{0, 0, 0};  // (Ixx, Iyy, Izz) kg*m^2 at COM

  double axial_inertia() const { return inertia_diag.z(); }
  double transverse_inertia() const { return inertia_diag.x(); }
};

/// Lumped-mass COM and inertia as a function of hinge angles. Arms and fins
/// are point masses at mid-span; the central body is a uniform cylinder.
MassProperties mass_properties(const VehicleConfig& config,
                               const DeploymentState& deploy);

/// Thrust required to hover, total_mass * g.
double hover_thrust(const VehicleConfig& config);

/// Maximum total thrust implied by the hover throttle fraction.
double implied_max_thrust(const VehicleConfig& config);

/// Hinge spring torque at the given angle, linear between the closed and
/// open endpoints.
double hinge_torque(const VehicleConfig& config, double angle);

}  // namespace tubesim
