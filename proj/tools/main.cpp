// tubesim command line front end.
//
// Exit codes: 0 success, 2 configuration error, 3 launch failure,
// 4 integration fault.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tubesim/scaling.hpp"
#include "tubesim/scenario.hpp"
#include "tubesim/simulation.hpp"
#include "tubesim/sweep.hpp"

namespace fs = std::filesystem;
using namespace tubesim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitLaunch = 3;
constexpr int kExitIntegration = 4;

// --out wins over TUBESIM_OUT_DIR; default is the current directory.
fs::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("TUBESIM_OUT_DIR"); env && *env) {
    return env;
  }
  return ".";
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open file: " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_flag,
                 std::optional<uint64_t> seed) {
  Scenario sc = load_scenario(scenario_path);
  if (seed) sc.rng_seed = *seed;

  const fs::path out = resolve_out_dir(out_flag);
  fs::create_directories(out);

  RunResult result;
  try {
    result = run_scenario(sc);
  } catch (const LaunchFailure&) {
    write_file(out / "telemetry.csv", csv_header() + "\n");
    throw;
  }
  write_file(out / "telemetry.csv", result.csv);
  write_file(out / "report.json", report_to_json(result.report) + "\n");
  std::ostringstream log;
  for (const auto& line : result.log) log << line << "\n";
  write_file(out / "run.log", log.str());

  if (!result.fault.empty()) {
    std::cerr << "integration fault: " << result.fault << "\n";
    return kExitIntegration;
  }
  std::cout << report_to_json(result.report) << "\n";
  return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& spec_path,
              int count, int jobs, const std::string& out_flag) {
  Scenario sc = load_scenario(scenario_path);
  SweepSpec spec = load_sweep_spec(spec_path);

  const fs::path out = resolve_out_dir(out_flag);
  fs::create_directories(out);

  SweepResult result = run_sweep(sc, spec, count, jobs);
  const std::string csv = sweep_to_csv(spec, result);
  write_file(out / "sweep.csv", csv);

  std::cout << result.runs.size() << " runs, " << result.successes
            << " completed, " << result.flight_ok << " successful flights\n";
  return 0;
}

int cmd_scale(const std::string& scenario_path, double lambda,
              std::optional<double> mass_override,
              const std::string& out_flag) {
  Scenario sc = load_scenario(scenario_path);
  if (!(lambda > 0.0)) throw ConfigError("--lambda must be > 0");

  ScaledConfigs scaled =
      subscale_config(sc.vehicle, sc.aero, lambda, mass_override);
  Scenario sub = sc;
  sub.vehicle = scaled.vehicle;
  sub.aero = scaled.aero;
  sub.launcher = subscale_launcher(sc.launcher, lambda);
  sub.validate();

  const std::string text = toml::serialize(scenario_to_toml(sub));
  const fs::path out = resolve_out_dir(out_flag);
  fs::create_directories(out);
  write_file(out / "scaled_scenario.toml", text);
  std::cout << text;

  const ScaleMap map{lambda};
  std::fprintf(stderr,
               "# lambda = %g: velocities x %.6g, times x %.6g, masses x %.6g\n",
               lambda, 1.0 / map.velocity_factor(), 1.0 / map.time_factor(),
               scaled.vehicle.total_mass / sc.vehicle.total_mass);
  return 0;
}

int cmd_analyze(const std::string& csv_path) {
  RunReport report = analyze_csv(read_file(csv_path));
  std::cout << report_to_json(report) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic launch-to-hover simulation for a tube-launched "
               "folding hexacopter"};
  app.require_subcommand(1);

  std::string scenario_path, out_flag, spec_path, csv_path;
  std::optional<uint64_t> seed;
  std::optional<double> mass_override;
  int count = 1, jobs = 1;
  double lambda = 1.0;

  auto* sim = app.add_subcommand("simulate", "Run one scenario end to end");
  sim->add_option("scenario", scenario_path, "Scenario TOML file")->required();
  sim->add_option("--out", out_flag, "Output directory");
  sim->add_option("--seed", seed, "Override the scenario RNG seed");

  auto* swp = app.add_subcommand("sweep", "Run a parameter sweep");
  swp->add_option("scenario", scenario_path, "Base scenario TOML")->required();
  swp->add_option("--spec", spec_path, "Sweep spec TOML")->required();
  swp->add_option("-n,--count", count, "Runs per grid point")->required();
  swp->add_option("--jobs", jobs, "Worker threads");
  swp->add_option("--out", out_flag, "Output directory");

  auto* scl = app.add_subcommand("scale", "Emit a Froude-scaled scenario");
  scl->add_option("scenario", scenario_path, "Full-scale scenario TOML")
      ->required();
  scl->add_option("--lambda", lambda, "Length scale factor")->required();
  scl->add_option("--mass", mass_override, "Override the scaled mass (kg)");
  scl->add_option("--out", out_flag, "Output directory");

  auto* ana = app.add_subcommand("analyze", "Recompute a report from telemetry");
  ana->add_option("telemetry", csv_path, "Telemetry CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sim->parsed()) return cmd_simulate(scenario_path, out_flag, seed);
    if (swp->parsed()) {
      return cmd_sweep(scenario_path, spec_path, count, jobs, out_flag);
    }
    if (scl->parsed()) {
      return cmd_scale(scenario_path, lambda, mass_override, out_flag);
    }
    if (ana->parsed()) return cmd_analyze(csv_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const toml::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const LaunchFailure& e) {
    std::cerr << e.what() << "\n";
    return kExitLaunch;
  } catch (const IntegrationFault& e) {
    std::cerr << "integration fault: " << e.what() << "\n";
    return kExitIntegration;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
