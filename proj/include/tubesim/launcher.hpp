#pragma once

#include <Eigen/Core>

#include <stdexcept>

#include "tubesim/vehicle.hpp"

namespace tubesim {

/// Computed exit speed is non-positive: the chamber could not push the
/// vehicle out of the tube.
struct LaunchFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pneumatic launcher description. Pressures are absolute.
struct LauncherConfig {
  double chamber_pressure = 6.9e5;   // Pa
  double chamber_volume = 8.0e-3;    // m^3
  double ambient_pressure = 1.013e5; // Pa
  double gas_gamma = 1.30;           // CO2
  double tube_length = 0.35;         // m, powered stroke
  double tube_bore = 0.1524;         // m
  double carriage_mass = 0.30;       // kg, stays in the tube
  double launch_elevation = M_PI_2;  // rad from horizontal
  double efficiency = 0.07225;       // fraction of ideal gas force delivered
  double friction_force = 0.0;       // N, seal/rail friction

  double bore_area() const { return M_PI * 0.25 * tube_bore * tube_bore; }
  void validate() const;
};

/// State handed from the launcher to the ballistic phase.
struct ExitState {
  double exit_speed = 0.0;         // m/s
  double peak_acceleration = 0.0;  // m/s^2, kinematic
  double time_in_tube = 0.0;       // s
  Eigen::Vector3d exit_position{0, 0, 0};  // m, world frame (tube base origin)
  Eigen::Vector3d exit_velocity{0, 0, 0};  // m/s, world frame
};

/// Ideal work of adiabatic expansion from chamber pressure down to ambient,
/// net of ambient back-work. Upper bound on the kinetic energy the launcher
/// can impart.
double adiabatic_energy(const LauncherConfig& cfg);

/// Mean-force tube model: a constant efficiency-scaled pressure force over
/// the stroke, minus the gravity component and friction. The carriage is
/// retained at the end of the stroke; the vehicle separates with the full
/// exit velocity along the tube axis.
ExitState simulate_tube_phase(const LauncherConfig& cfg,
                              const VehicleConfig& vehicle);

/// Drag-free apogee above the tube exit for a vertical launch, v^2 / 2g.
double apogee_bound(const ExitState& exit_state, double vehicle_mass);

}  // namespace tubesim
