#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tubesim/dynamics.hpp"
#include "tubesim/scenario.hpp"

namespace tubesim {

/// One telemetry sample per physics step. The sensor frame is the most
/// recent control-rate sample.
struct TelemetryRow {
  double time = 0.0;
  RigidBodyState state;
  SensorFrame frame;
  AutonomyPhase phase = AutonomyPhase::InTube;
  std::array<double, 6> rotor_thrust{};
  bool spooled = false;
  bool tumbled = false;
};

/// Summary recomputable from telemetry alone; run() and analyze() produce
/// identical reports by construction.
struct RunReport {
  std::vector<std::pair<double, std::string>> phase_timeline;  // entry time, phase
  std::vector<SimEvent> events;  // Apogee / Tumble / Landed
  std::optional<double> apogee_altitude;
  std::optional<double> apogee_time;
  double max_tilt_ballistic_deg = 0.0;
  std::optional<double> final_drift;  // m over the final 10 s window
  std::optional<double> motors_on_time;
  std::optional<double> altitude_closed_time;
  std::optional<double> vio_init_time;
  std::optional<double> position_control_time;
  bool reached_position_control = false;
  bool tumbled = false;
  bool spooled_before_apogee = false;
  bool complete = false;

  bool success() const {
    return reached_position_control && !tumbled && spooled_before_apogee;
  }
};

struct RunResult {
  RunReport report;
  std::string csv;                  // full telemetry, header + rows
  std::vector<std::string> log;     // phase changes and events
  ExitState exit_state;
  std::string fault;                // non-empty if integration faulted
};

/// Executes launcher -> dynamics -> sensors -> autonomy and returns telemetry
/// plus the analyzed report. Throws ConfigError / LaunchFailure. An
/// integration fault is reported in RunResult::fault with the partial
/// telemetry retained.
RunResult run_scenario(const Scenario& scenario);

std::string csv_header();
std::string csv_row(const TelemetryRow& row);

/// Recomputes a RunReport from telemetry rows / CSV text. Malformed CSV
/// raises ConfigError with the offending line number.
RunReport analyze_rows(const std::vector<TelemetryRow>& rows,
                       double drift_window = 10.0);
RunReport analyze_csv(const std::string& csv_text, double drift_window = 10.0);
std::vector<TelemetryRow> parse_csv(const std::string& csv_text);

std::string report_to_json(const RunReport& report);

}  // namespace tubesim
