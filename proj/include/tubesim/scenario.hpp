#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tubesim/aero.hpp"
#include "tubesim/autonomy.hpp"
#include "tubesim/launcher.hpp"
#include "tubesim/sensors.hpp"
#include "tubesim/toml.hpp"
#include "tubesim/vehicle.hpp"

namespace tubesim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ornstein-Uhlenbeck gusts around a constant mean wind, per axis.
struct WindConfig {
  Eigen::Vector3d mean{0, 0, 0};  // m/s
  double gust_std = 0.3;          // m/s
  double gust_tau = 1.0;          // s correlation time

  void validate() const;
};

/// One complete simulation setup; serializes to/from the scenario TOML.
struct Scenario {
  VehicleConfig vehicle;
  LauncherConfig launcher;
  AeroConfig aero;
  SensorConfig sensors;
  AutonomyConfig autonomy;
  WindConfig wind;
  double duration = 30.0;        // s
  double dt = 1e-3;              // s
  uint64_t rng_seed = 1;
  double tipoff_rate_std = 0.05; // rad/s at tube exit
  bool ground_plane = true;

  void validate() const;
};

/// Loads a scenario (defaults overlaid with the file's entries). Unknown
/// tables or keys are rejected. Launcher pressures are given in bar.
Scenario scenario_from_toml(const toml::Document& doc);
Scenario load_scenario(const std::string& path);
toml::Document scenario_to_toml(const Scenario& s);

/// Sets a numeric field by dotted path, e.g. "launcher.chamber_pressure_bar"
/// or "wind.mean_x". Bool fields accept 0/1. Used by the sweep runner.
void set_scenario_value(Scenario& s, const std::string& dotted_key,
                        double value);

/// All settable dotted keys (for error messages and docs).
std::vector<std::string> scenario_keys();

}  // namespace tubesim
