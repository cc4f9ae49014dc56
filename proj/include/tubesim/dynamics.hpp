#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tubesim/aero.hpp"
#include "tubesim/vehicle.hpp"

namespace tubesim {

/// A derivative produced NaN/Inf; carries a short diagnostic.
struct IntegrationFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// World frame is z-up. attitude maps body to world; angular_rate is in the
/// body frame.
struct RigidBodyState {
  Eigen::Vector3d position{0, 0, 0};
  Eigen::Vector3d velocity{0, 0, 0};
  Eigen::Quaterniond attitude{1, 0, 0, 0};
  Eigen::Vector3d angular_rate{0, 0, 0};
};

enum class SimEventKind {
  TubeExit,
  ArmLatched,
  FinSettled,
  Apogee,
  Landed,
  Tumble,
};

struct SimEvent {
  SimEventKind kind;
  double time = 0.0;
  int index = -1;  // arm/fin index where applicable
};

const char* to_string(SimEventKind kind);

/// Supplies the external wrench (aero + thrust) for an RK4 stage state.
using WrenchHook =
    std::function<Wrench(const RigidBodyState&, const DeploymentState&, double t)>;

/// Fixed-step RK4 integrator over the 6-DOF rigid-body equations with
/// quasi-static deployment-dependent inertia. Hinge angles follow
/// damping-dominated spring dynamics and latch at full travel.
class Integrator {
 public:
  explicit Integrator(VehicleConfig vehicle, bool inertia_rate_term = false)
      : vehicle_(std::move(vehicle)), inertia_rate_term_(inertia_rate_term) {
    vehicle_.validate();
  }

  /// Advances state and deployment by dt; returns latch/settle events.
  std::vector<SimEvent> step(RigidBodyState& state, DeploymentState& deploy,
                             const WrenchHook& wrench_hook, double t,
                             double dt) const;

  const VehicleConfig& vehicle() const { return vehicle_; }

 private:
  VehicleConfig vehicle_;
  bool inertia_rate_term_;
};

/// Emits Apogee when vertical velocity crosses zero from positive.
std::optional<SimEvent> detect_apogee(const RigidBodyState& prev,
                                      const RigidBodyState& cur, double t);

/// Tumble rule: body z-axis more than 90 deg from world-up AND rate magnitude
/// above threshold, both sustained for a window.
class TumbleDetector {
 public:
  explicit TumbleDetector(double rate_threshold = 3.0, double window = 0.5)
      : rate_threshold_(rate_threshold), window_(window) {}

  std::optional<SimEvent> update(const RigidBodyState& state, double t);
  void reset() { window_start_.reset(); fired_ = false; }

 private:
  double rate_threshold_;
  double window_;
  std::optional<double> window_start_;
  bool fired_ = false;
};

/// Total mechanical energy (translational + rotational + potential) for
/// conservation checks.
double mechanical_energy(const VehicleConfig& vehicle,
                         const DeploymentState& deploy,
                         const RigidBodyState& state);

}  // namespace tubesim
