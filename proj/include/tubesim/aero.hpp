#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "tubesim/vehicle.hpp"

namespace tubesim {

/// Aerodynamic model parameters. Areas in m^2, slopes per rad.
///
/// fin_lift_slope defaults to the low-aspect-ratio approximation
/// 2*pi*AR / (AR + 2) with AR = fin_span^2 / fin_area. body_normal_slope and
/// body_ac_from_nose are calibration values chosen so the deployed
/// aerodynamic center lands at its measured station.
struct AeroConfig {
  double body_drag_coeff_nosecone = 0.45;
  double body_drag_coeff_bluff = 0.90;
  double reference_area = 0.0176715;  // folded tube cross-section
  double fin_span = 0.10;
  double fin_area = 0.03;             // per fin
  double fin_lift_slope = 0.897;
  double body_normal_slope = 2.7736;
  double body_ac_from_nose = 0.10;    // m
  double fin_ac_from_nose = 0.72;     // m
  double stall_angle = 25.0 * M_PI / 180.0;
  double yaw_damping_coeff = 0.02;    // N*m*s^2/rad^2
  double autorotation_coeff = 2.5e-3; // m^3, deep-stall driving moment
  double deployed_extra_area = 0.02;  // m^2 added frontal area when open
  double air_density = 1.225;         // kg/m^3

  void validate() const;
};

struct StabilityReport {
  double ac_from_nose = 0.0;   // m
  double com_from_nose = 0.0;  // m
  double static_margin = 0.0;  // m, ac - com; positive = stable
  bool stable = false;
};

/// Force (N) and moment (N*m) about the COM, both in the body frame.
struct Wrench {
  Eigen::Vector3d force{0, 0, 0};
  Eigen::Vector3d moment{0, 0, 0};
};

/// Minimal state needed by the aerodynamic model.
struct AeroState {
  Eigen::Vector3d velocity{0, 0, 0};      // m/s, world
  Eigen::Quaterniond attitude{1, 0, 0, 0};  // body -> world
  Eigen::Vector3d angular_rate{0, 0, 0};  // rad/s, body
};

/// Normal-force-weighted average of the body and fin aerodynamic centers.
/// Fin contribution scales with sin(fin angle); folded fins contribute
/// nothing.
double aerodynamic_center(const AeroConfig& aero, const VehicleConfig& vehicle,
                          const DeploymentState& deploy);

StabilityReport static_stability(const AeroConfig& aero,
                                 const VehicleConfig& vehicle,
                                 const DeploymentState& deploy);

/// Aerodynamic wrench in the body frame. Axial drag acts through the COM;
/// the normal force acts at the aerodynamic center, which yields the
/// weathercock restoring (or, for negative margin, destabilizing) moment.
/// Rate damping scales with fin deployment.
Wrench aero_wrench(const AeroConfig& aero, const VehicleConfig& vehicle,
                   const DeploymentState& deploy, const AeroState& state,
                   const Eigen::Vector3d& wind);

/// Aggregate normal-force slope-area product (m^2/rad) at the given
/// deployment; the weighting used for both the AC position and fin lift.
double normal_force_weight(const AeroConfig& aero,
                           const DeploymentState& deploy);

}  // namespace tubesim
