#include "tubesim/scenario.hpp"

#include <cmath>
#include <functional>

namespace tubesim {

void WindConfig::validate() const {
  if (gust_std < 0.0) throw ConfigError("wind gust_std must be >= 0");
  if (!(gust_tau > 0.0)) throw ConfigError("wind gust_tau must be > 0");
}

void Scenario::validate() const {
  try {
    vehicle.validate();
    launcher.validate();
    aero.validate();
    sensors.validate();
    autonomy.validate();
    wind.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(duration > 0.0)) throw ConfigError("sim duration must be > 0");
  if (!(dt > 0.0 && dt <= 5e-3)) throw ConfigError("sim dt must be in (0, 5 ms]");
  if (launcher.tube_bore < vehicle.folded_diameter) {
    throw ConfigError("tube bore smaller than folded vehicle diameter");
  }
}

namespace {

enum class Kind { Double, Int, Bool, Seed };

struct Field {
  const char* table;
  const char* key;
  Kind kind;
  double scale;       // stored = file_value * scale
  void* ptr;
};

// One flat registry drives TOML load, TOML save, and sweep overrides.
std::vector<Field> fields(Scenario& s) {
  auto d = [](const char* t, const char* k, double& r, double scale = 1.0) {
    return Field{t, k, Kind::Double, scale, &r};
  };
  auto i = [](const char* t, const char* k, int& r) {
    return Field{t, k, Kind::Int, 1.0, &r};
  };
  auto b = [](const char* t, const char* k, bool& r) {
    return Field{t, k, Kind::Bool, 1.0, &r};
  };
  VehicleConfig& v = s.vehicle;
  LauncherConfig& l = s.launcher;
  AeroConfig& a = s.aero;
  SensorConfig& sn = s.sensors;
  AutonomyConfig& au = s.autonomy;
  ControllerGains& g = au.gains;
  return {
      d("vehicle", "total_mass", v.total_mass),
      d("vehicle", "body_length", v.body_length),
      d("vehicle", "folded_diameter", v.folded_diameter),
      d("vehicle", "unfolded_diameter", v.unfolded_diameter),
      d("vehicle", "nose_battery_mass", v.nose_battery_mass),
      i("vehicle", "arm_count", v.arm_count),
      d("vehicle", "arm_mass", v.arm_mass),
      d("vehicle", "arm_length", v.arm_length),
      i("vehicle", "fin_count", v.fin_count),
      d("vehicle", "fin_mass", v.fin_mass),
      d("vehicle", "fin_length", v.fin_length),
      d("vehicle", "hinge_torque_closed", v.hinge_torque_closed),
      d("vehicle", "hinge_torque_open", v.hinge_torque_open),
      d("vehicle", "hinge_travel", v.hinge_travel),
      d("vehicle", "hinge_damping", v.hinge_damping),
      d("vehicle", "max_total_thrust", v.max_total_thrust),
      d("vehicle", "hover_throttle_fraction", v.hover_throttle_fraction),
      d("vehicle", "battery_station", v.battery_station),
      d("vehicle", "body_station", v.body_station),
      d("vehicle", "arm_hinge_station", v.arm_hinge_station),
      d("vehicle", "fin_hinge_station", v.fin_hinge_station),
      d("vehicle", "hull_radius", v.hull_radius),
      d("vehicle", "body_lump_length", v.body_lump_length),

      d("launcher", "chamber_pressure_bar", l.chamber_pressure, 1e5),
      d("launcher", "chamber_volume", l.chamber_volume),
      d("launcher", "ambient_pressure_bar", l.ambient_pressure, 1e5),
      d("launcher", "gas_gamma", l.gas_gamma),
      d("launcher", "tube_length", l.tube_length),
      d("launcher", "tube_bore", l.tube_bore),
      d("launcher", "carriage_mass", l.carriage_mass),
      d("launcher", "launch_elevation", l.launch_elevation),
      d("launcher", "efficiency", l.efficiency),
      d("launcher", "friction_force", l.friction_force),

      d("aero", "body_drag_coeff_nosecone", a.body_drag_coeff_nosecone),
      d("aero", "body_drag_coeff_bluff", a.body_drag_coeff_bluff),
      d("aero", "reference_area", a.reference_area),
      d("aero", "fin_span", a.fin_span),
      d("aero", "fin_area", a.fin_area),
      d("aero", "fin_lift_slope", a.fin_lift_slope),
      d("aero", "body_normal_slope", a.body_normal_slope),
      d("aero", "body_ac_from_nose", a.body_ac_from_nose),
      d("aero", "fin_ac_from_nose", a.fin_ac_from_nose),
      d("aero", "stall_angle", a.stall_angle),
      d("aero", "yaw_damping_coeff", a.yaw_damping_coeff),
      d("aero", "autorotation_coeff", a.autorotation_coeff),
      d("aero", "deployed_extra_area", a.deployed_extra_area),
      d("aero", "air_density", a.air_density),

      d("sensors", "accel_saturation", sn.accel_saturation),
      d("sensors", "baro_blackout", sn.baro_blackout),
      d("sensors", "baro_noise_std", sn.baro_noise_std),
      d("sensors", "gyro_noise_std", sn.gyro_noise_std),
      d("sensors", "accel_noise_std", sn.accel_noise_std),
      d("sensors", "range_max", sn.range_max),
      d("sensors", "range_fov", sn.range_fov),
      d("sensors", "vio_rate", sn.vio_rate),
      d("sensors", "vio_noise_std", sn.vio_noise_std),
      d("sensors", "vio_yaw_noise_std", sn.vio_yaw_noise_std),
      d("sensors", "vio_window", sn.vio_window),

      b("autonomy", "enabled", au.enabled),
      d("autonomy", "control_rate", au.control_rate),
      d("autonomy", "tube_clearance", au.tube_clearance),
      d("autonomy", "drift_wait", au.drift_wait),
      d("autonomy", "rate_eps", au.rate_eps),
      d("autonomy", "vz_eps", au.vz_eps),
      d("autonomy", "vio_var_threshold", au.vio_var_threshold),
      d("autonomy", "open_loop_bias", au.open_loop_bias),
      d("autonomy", "spool_time", au.spool_time),
      d("autonomy", "spool_tau", au.spool_tau),
      d("autonomy", "vio_dropout", au.vio_dropout),
      d("autonomy", "att_kq", g.att_kq),
      d("autonomy", "att_kq_yaw", g.att_kq_yaw),
      d("autonomy", "att_kw", g.att_kw),
      d("autonomy", "yaw_moment_coeff", g.yaw_moment_coeff),
      d("autonomy", "alt_kp", g.alt_kp),
      d("autonomy", "alt_ki", g.alt_ki),
      d("autonomy", "alt_kd", g.alt_kd),
      d("autonomy", "pos_kp", g.pos_kp),
      d("autonomy", "pos_ki", g.pos_ki),
      d("autonomy", "pos_kd", g.pos_kd),
      d("autonomy", "tilt_limit", g.tilt_limit),

      d("wind", "mean_x", s.wind.mean.x()),
      d("wind", "mean_y", s.wind.mean.y()),
      d("wind", "mean_z", s.wind.mean.z()),
      d("wind", "gust_std", s.wind.gust_std),
      d("wind", "gust_tau", s.wind.gust_tau),

      d("sim", "duration", s.duration),
      d("sim", "dt", s.dt),
      {"sim", "rng_seed", Kind::Seed, 1.0, &s.rng_seed},
      d("sim", "tipoff_rate_std", s.tipoff_rate_std),
      b("sim", "ground_plane", s.ground_plane),
  };
}

void assign(const Field& f, double value) {
  switch (f.kind) {
    case Kind::Double:
      *static_cast<double*>(f.ptr) = value * f.scale;
      break;
    case Kind::Int:
      *static_cast<int*>(f.ptr) = static_cast<int>(std::llround(value));
      break;
    case Kind::Bool:
      *static_cast<bool*>(f.ptr) = value > 0.5;
      break;
    case Kind::Seed:
      *static_cast<uint64_t*>(f.ptr) = static_cast<uint64_t>(std::llround(value));
      break;
  }
}

double read_back(const Field& f) {
  switch (f.kind) {
    case Kind::Double:
      return *static_cast<double*>(f.ptr) / f.scale;
    case Kind::Int:
      return *static_cast<int*>(f.ptr);
    case Kind::Bool:
      return *static_cast<bool*>(f.ptr) ? 1.0 : 0.0;
    case Kind::Seed:
      return static_cast<double>(*static_cast<uint64_t*>(f.ptr));
  }
  return 0.0;
}

}  // namespace

Scenario scenario_from_toml(const toml::Document& doc) {
  Scenario s;
  auto regs = fields(s);
  for (const auto& [table_name, table] : doc.tables) {
    if (table_name.empty()) {
      if (!table.entries.empty()) {
        throw ConfigError("unknown top-level key '" +
                          table.entries.front().first +
                          "' (keys must live in a table)");
      }
      continue;
    }
    bool table_known = false;
    for (const auto& f : regs) {
      if (table_name == f.table) {
        table_known = true;
        break;
      }
    }
    if (!table_known) {
      throw ConfigError("unknown scenario table [" + table_name + "]");
    }
    for (const auto& [key, value] : table.entries) {
      const Field* match = nullptr;
      for (const auto& f : regs) {
        if (table_name == f.table && key == f.key) {
          match = &f;
          break;
        }
      }
      if (!match) {
        throw ConfigError("unknown key '" + key + "' in table [" + table_name +
                          "]");
      }
      double v = 0.0;
      if (std::holds_alternative<double>(value)) {
        v = std::get<double>(value);
      } else if (std::holds_alternative<bool>(value)) {
        v = std::get<bool>(value) ? 1.0 : 0.0;
      } else {
        throw ConfigError("key '" + key + "' must be a number or bool");
      }
      assign(*match, v);
    }
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  try {
    return scenario_from_toml(toml::parse_file(path));
  } catch (const toml::ParseError& e) {
    throw ConfigError(e.what());
  }
}

toml::Document scenario_to_toml(const Scenario& s) {
  Scenario copy = s;  // registry needs mutable refs
  auto regs = fields(copy);
  toml::Document doc;
  for (const auto& f : regs) {
    toml::Table& t = doc.get_or_create(f.table);
    if (f.kind == Kind::Bool) {
      t.entries.emplace_back(f.key, *static_cast<bool*>(f.ptr));
    } else {
      t.entries.emplace_back(f.key, read_back(f));
    }
  }
  return doc;
}

void set_scenario_value(Scenario& s, const std::string& dotted_key,
                        double value) {
  const size_t dot = dotted_key.find('.');
  if (dot == std::string::npos) {
    throw ConfigError("expected table.key, got '" + dotted_key + "'");
  }
  const std::string table = dotted_key.substr(0, dot);
  const std::string key = dotted_key.substr(dot + 1);
  auto regs = fields(s);
  for (const auto& f : regs) {
    if (table == f.table && key == f.key) {
      assign(f, value);
      return;
    }
  }
  throw ConfigError("unknown scenario key '" + dotted_key + "'");
}

std::vector<std::string> scenario_keys() {
  Scenario s;
  std::vector<std::string> out;
  for (const auto& f : fields(s)) {
    out.push_back(std::string(f.table) + "." + f.key);
  }
  return out;
}

}  // namespace tubesim
