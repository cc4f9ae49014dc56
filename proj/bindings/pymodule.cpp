#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tubesim/scaling.hpp"
#include "tubesim/scenario.hpp"
#include "tubesim/simulation.hpp"

namespace py = pybind11;
using namespace tubesim;

namespace {

Scenario scenario_from_text(const std::string& text) {
  return scenario_from_toml(toml::parse(text));
}

py::dict report_dict(const RunReport& r) {
  py::dict d;
  d["complete"] = r.complete;
  d["success"] = r.success();
  d["reached_position_control"] = r.reached_position_control;
  d["tumbled"] = r.tumbled;
  d["spooled_before_apogee"] = r.spooled_before_apogee;
  d["max_tilt_ballistic_deg"] = r.max_tilt_ballistic_deg;
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) d[key] = *v; else d[key] = py::none();
  };
  opt("apogee_altitude_m", r.apogee_altitude);
  opt("apogee_time_s", r.apogee_time);
  opt("final_drift_m", r.final_drift);
  opt("motors_on_time_s", r.motors_on_time);
  opt("altitude_closed_time_s", r.altitude_closed_time);
  opt("vio_init_time_s", r.vio_init_time);
  opt("position_control_time_s", r.position_control_time);
  py::list timeline;
  for (const auto& [t, name] : r.phase_timeline) {
    timeline.append(py::make_tuple(t, name));
  }
  d["phase_timeline"] = timeline;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simulation core for a tube-launched folding hexacopter";

  m.def("default_scenario_toml", []() {
    return toml::serialize(scenario_to_toml(Scenario{}));
  }, "Full default scenario as TOML text");

  m.def("run", [](const std::string& scenario_toml,
                  std::optional<uint64_t> seed) {
    Scenario sc = scenario_from_text(scenario_toml);
    if (seed) sc.rng_seed = *seed;
    RunResult res = run_scenario(sc);
    py::dict out;
    out["report"] = report_dict(res.report);
    out["csv"] = res.csv;
    out["log"] = res.log;
    out["exit_speed"] = res.exit_state.exit_speed;
    out["peak_acceleration"] = res.exit_state.peak_acceleration;
    out["fault"] = res.fault.empty() ? py::object(py::none())
                                     : py::object(py::str(res.fault));
    return out;
  }, py::arg("scenario_toml"), py::arg("seed") = py::none(),
     "Run one scenario given as TOML text");

  m.def("analyze", [](const std::string& csv_text) {
    return report_dict(analyze_csv(csv_text));
  }, py::arg("csv_text"), "Recompute a run report from telemetry CSV text");

  m.def("mass_properties", [](double arm_angle, double fin_angle) {
    VehicleConfig v;
    DeploymentState d = DeploymentState::folded(v.arm_count, v.fin_count);
    for (auto& a : d.arm_angles) a = arm_angle;
    for (auto& a : d.fin_angles) a = fin_angle;
    MassProperties mp = mass_properties(v, d);
    py::dict out;
    out["mass"] = v.total_mass;
    out["com_from_nose"] = mp.com_from_nose;
    out["inertia_axial"] = mp.axial_inertia();
    out["inertia_transverse"] = mp.transverse_inertia();
    return out;
  }, py::arg("arm_angle"), py::arg("fin_angle"),
     "Mass, center of mass and inertia at the given hinge angles");

  m.def("static_margin", [](bool deployed) {
    VehicleConfig v;
    AeroConfig a;
    DeploymentState d = deployed
        ? DeploymentState::deployed(v.arm_count, v.fin_count)
        : DeploymentState::folded(v.arm_count, v.fin_count);
    StabilityReport r = static_stability(a, v, d);
    py::dict out;
    out["ac_from_nose"] = r.ac_from_nose;
    out["com_from_nose"] = r.com_from_nose;
    out["static_margin"] = r.static_margin;
    out["stable"] = r.stable;
    return out;
  }, py::arg("deployed") = true);

  m.def("adiabatic_energy", [](double chamber_pressure, double chamber_volume,
                               double ambient_pressure, double gamma) {
    LauncherConfig cfg;
    cfg.chamber_pressure = chamber_pressure;
    cfg.chamber_volume = chamber_volume;
    cfg.ambient_pressure = ambient_pressure;
    cfg.gas_gamma = gamma;
    return adiabatic_energy(cfg);
  }, py::arg("chamber_pressure"), py::arg("chamber_volume"),
     py::arg("ambient_pressure") = 1.013e5, py::arg("gamma") = 1.30,
     "Ideal adiabatic expansion work, J");

  m.def("tube_exit", [](const std::string& scenario_toml) {
    Scenario sc = scenario_from_text(scenario_toml);
    ExitState e = simulate_tube_phase(sc.launcher, sc.vehicle);
    py::dict out;
    out["exit_speed"] = e.exit_speed;
    out["peak_acceleration"] = e.peak_acceleration;
    out["time_in_tube"] = e.time_in_tube;
    return out;
  }, py::arg("scenario_toml"));

  m.def("froude_number", &froude_number, py::arg("speed"), py::arg("length"));

  m.def("scale_scenario", [](const std::string& scenario_toml, double lambda,
                             std::optional<double> mass_override) {
    Scenario sc = scenario_from_text(scenario_toml);
    ScaledConfigs scaled =
        subscale_config(sc.vehicle, sc.aero, lambda, mass_override);
    Scenario sub = sc;
    sub.vehicle = scaled.vehicle;
    sub.aero = scaled.aero;
    sub.launcher = subscale_launcher(sc.launcher, lambda);
    sub.validate();
    return toml::serialize(scenario_to_toml(sub));
  }, py::arg("scenario_toml"), py::arg("lambda_"),
     py::arg("mass_override") = py::none(),
     "Froude-scaled scenario as TOML text");

  py::register_exception<ConfigError>(m, "ScenarioError");
  py::register_exception<LaunchFailure>(m, "LaunchError");
  py::register_exception<IntegrationFault>(m, "IntegrationError");
}
