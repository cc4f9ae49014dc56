#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "tubesim/aero.hpp"
#include "tubesim/launcher.hpp"
#include "tubesim/vehicle.hpp"

namespace tubesim {

/// Froude similarity factors between a sub-scale model and the full-scale
/// vehicle. Lengths scale by lambda, velocities and times by sqrt(lambda),
/// masses by lambda^3 under the uniform-density assumption.
struct ScaleMap {
  double length_factor = 1.0;  // lambda

  double velocity_factor() const { return std::sqrt(length_factor); }
  double time_factor() const { return std::sqrt(length_factor); }
  double mass_factor() const {
    return length_factor * length_factor * length_factor;
  }
};

struct TrajectoryPoint {
  double time = 0.0;
  Eigen::Vector3d position{0, 0, 0};
  Eigen::Vector3d velocity{0, 0, 0};
};

/// U / sqrt(g L).
double froude_number(double speed, double length);

/// Maps a sub-scale trajectory to full scale: positions x lambda,
/// velocities and times x sqrt(lambda).
std::vector<TrajectoryPoint> scale_trajectory(
    const std::vector<TrajectoryPoint>& traj, const ScaleMap& map);

/// Scaled vehicle + aero configuration: lengths / lambda, areas / lambda^2,
/// masses / lambda^3 (or pinned to mass_override when the physical model was
/// not density-consistent).
struct ScaledConfigs {
  VehicleConfig vehicle;
  AeroConfig aero;
};

ScaledConfigs subscale_config(const VehicleConfig& full, const AeroConfig& aero,
                              double lambda,
                              std::optional<double> mass_override = std::nullopt);

/// Froude-consistent launcher scaling: geometry by length rules, gauge
/// pressure / lambda so the exit velocity scales by sqrt(lambda).
LauncherConfig subscale_launcher(const LauncherConfig& full, double lambda);

}  // namespace tubesim
