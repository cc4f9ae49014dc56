#include "tubesim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <json.hpp>

namespace tubesim {

namespace {

Eigen::Quaterniond tube_attitude(double elevation) {
  // Rotates body +z onto the tube axis.
  const Eigen::Vector3d axis(std::cos(elevation), 0.0, std::sin(elevation));
  return Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitZ(), axis);
}

double tilt_deg(const Eigen::Quaterniond& q) {
  const double cz =
      std::clamp((q * Eigen::Vector3d::UnitZ()).z(), -1.0, 1.0);
  return std::acos(cz) * 180.0 / M_PI;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string csv_header() {
  return "time,px,py,pz,vx,vy,vz,qw,qx,qy,qz,wx,wy,wz,"
         "ax,ay,az,gx,gy,gz,baro,baro_valid,range,range_valid,"
         "vio_valid,vio_x,vio_y,vio_z,vio_yaw,vio_var_xy,"
         "phase,t1,t2,t3,t4,t5,t6,spooled,tumbled";
}

std::string csv_row(const TelemetryRow& r) {
  std::ostringstream o;
  const auto& s = r.state;
  const auto& f = r.frame;
  o << fmt(r.time);
  for (int i = 0; i < 3; ++i) o << ',' << fmt(s.position(i));
  for (int i = 0; i < 3; ++i) o << ',' << fmt(s.velocity(i));
  o << ',' << fmt(s.attitude.w()) << ',' << fmt(s.attitude.x()) << ','
    << fmt(s.attitude.y()) << ',' << fmt(s.attitude.z());
  for (int i = 0; i < 3; ++i) o << ',' << fmt(s.angular_rate(i));
  for (int i = 0; i < 3; ++i) o << ',' << fmt(f.accel(i));
  for (int i = 0; i < 3; ++i) o << ',' << fmt(f.gyro(i));
  o << ',' << fmt(f.baro_altitude) << ',' << (f.baro_valid ? 1 : 0);
  o << ',' << fmt(f.range_distance) << ',' << (f.range_valid ? 1 : 0);
  o << ',' << (f.vio_valid ? 1 : 0);
  for (int i = 0; i < 3; ++i) o << ',' << fmt(f.vio_position(i));
  o << ',' << fmt(f.vio_yaw) << ',' << fmt(f.vio_variance_xy);
  o << ',' << to_string(r.phase);
  for (int i = 0; i < 6; ++i) o << ',' << fmt(r.rotor_thrust[i]);
  o << ',' << (r.spooled ? 1 : 0) << ',' << (r.tumbled ? 1 : 0);
  return o.str();
}

RunResult run_scenario(const Scenario& scenario) {
  scenario.validate();
  const Scenario& sc = scenario;

  RunResult result;
  result.exit_state = simulate_tube_phase(sc.launcher, sc.vehicle);
  const ExitState& exit = result.exit_state;

  SensorConfig sensor_cfg = sc.sensors;
  sensor_cfg.rng_seed = sc.rng_seed ^ 0x53656e736f727321ULL;
  SensorSuite sensors(sensor_cfg);
  std::mt19937_64 env_rng(sc.rng_seed ^ 0x57696e6421ULL);
  std::normal_distribution<double> unit(0.0, 1.0);

  Integrator integrator(sc.vehicle);
  AutonomyPipeline pipeline(sc.vehicle, sc.autonomy, 0.0);
  TumbleDetector tumble_detector;
  DeploymentState deploy =
      DeploymentState::folded(sc.vehicle.arm_count, sc.vehicle.fin_count);

  const double dt = sc.dt;
  const int control_every = std::max(
      1, static_cast<int>(std::llround(1.0 / (sc.autonomy.control_rate * dt))));
  const Eigen::Quaterniond q0 = tube_attitude(sc.launcher.launch_elevation);
  const Eigen::Vector3d tube_axis = q0 * Eigen::Vector3d::UnitZ();

  std::vector<TelemetryRow> rows;
  rows.reserve(static_cast<size_t>(sc.duration / dt) + 8);
  auto log_event = [&](const SimEvent& e) {
    std::ostringstream o;
    o << "t=" << fmt(e.time) << " event " << to_string(e.kind);
    if (e.index >= 0) o << "[" << e.index << "]";
    result.log.push_back(o.str());
  };

  RigidBodyState state;
  state.attitude = q0;
  Eigen::Vector3d wind = sc.wind.mean;
  AutonomyPipeline::Output control{};
  SensorFrame frame;
  bool apogee_seen = false;
  bool tumbled = false;
  bool launched_clear = false;
  size_t logged_changes = 0;

  auto thrust_wrench = [&](const std::array<double, 6>& thrust) {
    return rotor_wrench(thrust, sc.vehicle.rotor_arm_radius(),
                        sc.autonomy.gains.yaw_moment_coeff);
  };

  auto record = [&](double t, const Eigen::Vector3d& accel_world,
                    bool control_tick) {
    if (control_tick) {
      frame = sensors.sample(state, accel_world, t, 0.0);
      control = pipeline.update(frame, deploy.all_arms_latched(), apogee_seen,
                                tumbled, t);
      sensors.enable_vio(control.vio_enable);
      for (; logged_changes < pipeline.phase_log().size(); ++logged_changes) {
        const auto& c = pipeline.phase_log()[logged_changes];
        result.log.push_back("t=" + fmt(c.time) + " phase " +
                             to_string(c.from) + " -> " + to_string(c.to) +
                             " (" + c.guard + ")");
      }
    }
    TelemetryRow row;
    row.time = t;
    row.state = state;
    row.frame = frame;
    row.phase = pipeline.phase();
    row.rotor_thrust = control.rotor_thrust;
    row.spooled = control.spooled;
    row.tumbled = tumbled;
    rows.push_back(std::move(row));
  };

  // --- in-tube phase: closed-form constant acceleration along the axis ---
  const double a_tube = exit.peak_acceleration;
  const double t_exit = exit.time_in_tube;
  long k = 0;
  for (; k * dt < t_exit; ++k) {
    const double t = k * dt;
    state.position = tube_axis * (0.5 * a_tube * t * t);
    state.velocity = tube_axis * (a_tube * t);
    record(t, tube_axis * a_tube, k % control_every == 0);
  }
  log_event({SimEventKind::TubeExit, t_exit});

  // Hand over to the integrator on the first grid point past tube exit,
  // continuing ballistically from the exact exit state.
  {
    const double tau = k * dt - t_exit;
    state.position = exit.exit_position + exit.exit_velocity * tau -
                     0.5 * kGravity * tau * tau * Eigen::Vector3d::UnitZ();
    state.velocity =
        exit.exit_velocity - kGravity * tau * Eigen::Vector3d::UnitZ();
    std::normal_distribution<double> tip(0.0, sc.tipoff_rate_std);
    state.angular_rate =
        Eigen::Vector3d(tip(env_rng), tip(env_rng), tip(env_rng));
  }

  // --- free flight ---
  const long total_steps = static_cast<long>(std::llround(sc.duration / dt));
  try {
  for (; k <= total_steps; ++k) {
    const double t = k * dt;

    // Ornstein-Uhlenbeck gusts.
    if (sc.wind.gust_std > 0.0) {
      const double a = dt / sc.wind.gust_tau;
      const double diff = sc.wind.gust_std * std::sqrt(2.0 * a);
      for (int i = 0; i < 3; ++i) {
        wind(i) += (sc.wind.mean(i) - wind(i)) * a + diff * unit(env_rng);
      }
    }

    const Eigen::Vector3d wind_now = wind;
    const auto hook = [&](const RigidBodyState& s, const DeploymentState& d,
                          double) {
      AeroState as{s.velocity, s.attitude, s.angular_rate};
      Wrench w = aero_wrench(sc.aero, sc.vehicle, d, as, wind_now);
      const Wrench tw = thrust_wrench(control.rotor_thrust);
      w.force += tw.force;
      w.moment += tw.moment;
      return w;
    };

    const bool control_tick = k % control_every == 0;
    Eigen::Vector3d accel_world = Eigen::Vector3d::Zero();
    if (control_tick) {
      const Wrench w = hook(state, deploy, t);
      accel_world = Eigen::Vector3d(0, 0, -kGravity) +
                    (state.attitude * w.force) / sc.vehicle.total_mass;
    }
    record(t, accel_world, control_tick);
    if (k == total_steps) break;

    const RigidBodyState prev = state;
    auto events = integrator.step(state, deploy, hook, t, dt);
    for (const auto& e : events) log_event(e);

    if (auto apogee = detect_apogee(prev, state, t + dt)) {
      if (!apogee_seen) {
        apogee_seen = true;
        log_event(*apogee);
      }
    }
    if (auto tum = tumble_detector.update(state, t + dt)) {
      tumbled = true;
      log_event(*tum);
    }
    if (sc.ground_plane && !launched_clear && state.position.z() > 0.5) {
      launched_clear = true;
    }
    if (sc.ground_plane && launched_clear && state.position.z() <= 0.0 &&
        state.velocity.z() < 0.0) {
      record(t + dt, accel_world, false);
      log_event({SimEventKind::Landed, t + dt});
      break;
    }
  }
  } catch (const IntegrationFault& e) {
    // Keep the rows produced so far; the caller decides how to report.
    result.fault = e.what();
    result.log.push_back(std::string("integration fault: ") + e.what());
  }

  std::ostringstream csv;
  csv << csv_header() << "\n";
  for (const auto& row : rows) csv << csv_row(row) << "\n";
  result.csv = csv.str();
  result.report = analyze_csv(result.csv);
  return result;
}

std::vector<TelemetryRow> parse_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("telemetry CSV is empty");
  }
  if (line != csv_header()) {
    throw ConfigError("telemetry CSV line 1: unexpected header");
  }
  std::vector<TelemetryRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 39) {
      throw ConfigError("telemetry CSV line " + std::to_string(line_no) +
                        ": expected 39 columns, got " +
                        std::to_string(cells.size()));
    }
    auto num = [&](int i) {
      try {
        size_t pos = 0;
        double v = std::stod(cells[i], &pos);
        if (pos != cells[i].size()) throw std::invalid_argument("trailing");
        return v;
      } catch (...) {
        throw ConfigError("telemetry CSV line " + std::to_string(line_no) +
                          ": bad number '" + cells[i] + "'");
      }
    };
    TelemetryRow r;
    r.time = num(0);
    for (int i = 0; i < 3; ++i) r.state.position(i) = num(1 + i);
    for (int i = 0; i < 3; ++i) r.state.velocity(i) = num(4 + i);
    r.state.attitude = Eigen::Quaterniond(num(7), num(8), num(9), num(10));
    for (int i = 0; i < 3; ++i) r.state.angular_rate(i) = num(11 + i);
    for (int i = 0; i < 3; ++i) r.frame.accel(i) = num(14 + i);
    for (int i = 0; i < 3; ++i) r.frame.gyro(i) = num(17 + i);
    r.frame.baro_altitude = num(20);
    r.frame.baro_valid = num(21) > 0.5;
    r.frame.range_distance = num(22);
    r.frame.range_valid = num(23) > 0.5;
    r.frame.vio_valid = num(24) > 0.5;
    for (int i = 0; i < 3; ++i) r.frame.vio_position(i) = num(25 + i);
    r.frame.vio_yaw = num(28);
    r.frame.vio_variance_xy = num(29);
    const auto phase = phase_from_string(cells[30]);
    if (!phase) {
      throw ConfigError("telemetry CSV line " + std::to_string(line_no) +
                        ": unknown phase '" + cells[30] + "'");
    }
    r.phase = *phase;
    for (int i = 0; i < 6; ++i) r.rotor_thrust[i] = num(31 + i);
    r.spooled = num(37) > 0.5;
    r.tumbled = num(38) > 0.5;
    rows.push_back(std::move(r));
  }
  return rows;
}

RunReport analyze_rows(const std::vector<TelemetryRow>& rows,
                       double drift_window) {
  RunReport rep;
  if (rows.empty()) return rep;

  AutonomyPhase prev_phase = rows.front().phase;
  rep.phase_timeline.emplace_back(rows.front().time, to_string(prev_phase));
  double spool_time = -1.0;
  bool landed = false;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.phase != prev_phase) {
      rep.phase_timeline.emplace_back(r.time, to_string(r.phase));
      switch (r.phase) {
        case AutonomyPhase::AttitudeStab: rep.motors_on_time = r.time; break;
        case AutonomyPhase::AltitudeClosed: rep.altitude_closed_time = r.time; break;
        case AutonomyPhase::VioInit: rep.vio_init_time = r.time; break;
        case AutonomyPhase::PositionControl:
          rep.position_control_time = r.time;
          break;
        default: break;
      }
      prev_phase = r.phase;
    }
    if (r.phase == AutonomyPhase::PositionControl) {
      rep.reached_position_control = true;
    }
    if (r.spooled && spool_time < 0.0) spool_time = r.time;
    if (!r.tumbled && i + 1 < rows.size() && rows[i + 1].tumbled) {
      rep.events.push_back({SimEventKind::Tumble, rows[i + 1].time});
    }
    rep.tumbled = rep.tumbled || r.tumbled ||
                  r.phase == AutonomyPhase::FailTumble;
    if (!rep.apogee_time && i + 1 < rows.size() &&
        r.state.velocity.z() > 0.0 && rows[i + 1].state.velocity.z() <= 0.0) {
      rep.apogee_time = rows[i + 1].time;
      rep.apogee_altitude = rows[i + 1].state.position.z();
      rep.events.push_back({SimEventKind::Apogee, rows[i + 1].time});
    }
    if (r.phase == AutonomyPhase::InTube ||
        r.phase == AutonomyPhase::BallisticPassive) {
      rep.max_tilt_ballistic_deg =
          std::max(rep.max_tilt_ballistic_deg, tilt_deg(r.state.attitude));
    }
    if (i > 0 && r.state.position.z() <= 0.0 && r.state.velocity.z() < 0.0 &&
        !landed && rows[i - 1].state.position.z() > 0.0) {
      landed = true;
      rep.events.push_back({SimEventKind::Landed, r.time});
    }
  }
  std::sort(rep.events.begin(), rep.events.end(),
            [](const SimEvent& a, const SimEvent& b) { return a.time < b.time; });

  rep.spooled_before_apogee =
      spool_time >= 0.0 && (!rep.apogee_time || spool_time <= *rep.apogee_time);

  const double t_end = rows.back().time;
  const double t0 = t_end - drift_window;
  if (t0 >= rows.front().time) {
    Eigen::Vector2d ref{0, 0};
    bool have_ref = false;
    double drift = 0.0;
    for (const auto& r : rows) {
      if (r.time < t0) continue;
      const Eigen::Vector2d xy = r.state.position.head<2>();
      if (!have_ref) {
        ref = xy;
        have_ref = true;
      }
      drift = std::max(drift, (xy - ref).norm());
    }
    if (have_ref) rep.final_drift = drift;
  }

  const AutonomyPhase last = rows.back().phase;
  rep.complete = landed || last == AutonomyPhase::PositionControl ||
                 last == AutonomyPhase::FailTumble;
  return rep;
}

RunReport analyze_csv(const std::string& csv_text, double drift_window) {
  return analyze_rows(parse_csv(csv_text), drift_window);
}

std::string report_to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["complete"] = r.complete;
  j["success"] = r.success();
  j["reached_position_control"] = r.reached_position_control;
  j["tumbled"] = r.tumbled;
  j["spooled_before_apogee"] = r.spooled_before_apogee;
  if (r.apogee_altitude) j["apogee_altitude_m"] = *r.apogee_altitude;
  if (r.apogee_time) j["apogee_time_s"] = *r.apogee_time;
  j["max_tilt_ballistic_deg"] = r.max_tilt_ballistic_deg;
  if (r.final_drift) j["final_drift_m"] = *r.final_drift;
  if (r.motors_on_time) j["motors_on_time_s"] = *r.motors_on_time;
  if (r.altitude_closed_time) {
    j["altitude_closed_time_s"] = *r.altitude_closed_time;
  }
  if (r.vio_init_time) j["vio_init_time_s"] = *r.vio_init_time;
  if (r.position_control_time) {
    j["position_control_time_s"] = *r.position_control_time;
  }
  auto timeline = nlohmann::ordered_json::array();
  for (const auto& [t, name] : r.phase_timeline) {
    timeline.push_back({{"time", t}, {"phase", name}});
  }
  j["phase_timeline"] = timeline;
  auto events = nlohmann::ordered_json::array();
  for (const auto& e : r.events) {
    events.push_back({{"time", e.time}, {"kind", to_string(e.kind)}});
  }
  j["events"] = events;
  return j.dump(2);
}

}  // namespace tubesim
