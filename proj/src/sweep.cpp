#include "tubesim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

namespace tubesim {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void check_key(const std::string& key) {
  Scenario probe;
  set_scenario_value(probe, key, 0.0);  // throws ConfigError if unknown
}

// Dotted keys may be quoted in the file ("launcher.tube_length").
std::string unquote(const std::string& key) {
  if (key.size() >= 2 && key.front() == '"' && key.back() == '"') {
    return key.substr(1, key.size() - 2);
  }
  return key;
}

}  // namespace

size_t SweepSpec::grid_size() const {
  size_t n = 1;
  for (const auto& axis : grid) n *= axis.values.size();
  return n;
}

SweepSpec sweep_spec_from_toml(const toml::Document& doc) {
  SweepSpec spec;
  for (const auto& [table_name, table] : doc.tables) {
    if (table_name.empty()) {
      if (!table.entries.empty()) {
        throw ConfigError("sweep spec: top-level key '" +
                          table.entries.front().first +
                          "' outside [grid]/[monte_carlo]");
      }
      continue;
    }
    if (table_name == "grid") {
      for (const auto& [raw_key, value] : table.entries) {
        const std::string key = unquote(raw_key);
        if (!std::holds_alternative<std::vector<double>>(value)) {
          throw ConfigError("grid key '" + key + "' must be a numeric array");
        }
        const auto& vals = std::get<std::vector<double>>(value);
        if (vals.empty()) {
          throw ConfigError("grid key '" + key + "' has no values");
        }
        check_key(key);
        spec.grid.push_back({key, vals});
      }
    } else if (table_name == "monte_carlo") {
      for (const auto& [raw_key, value] : table.entries) {
        const std::string key = unquote(raw_key);
        if (!std::holds_alternative<std::vector<double>>(value) ||
            std::get<std::vector<double>>(value).size() != 2) {
          throw ConfigError("monte_carlo key '" + key +
                            "' must be [mean, std]");
        }
        const auto& mv = std::get<std::vector<double>>(value);
        if (mv[1] < 0.0) {
          throw ConfigError("monte_carlo key '" + key + "' has negative std");
        }
        check_key(key);
        spec.random.push_back({key, mv[0], mv[1]});
      }
    } else {
      throw ConfigError("sweep spec: unknown table [" + table_name + "]");
    }
  }
  if (spec.grid.empty() && spec.random.empty()) {
    throw ConfigError("sweep spec defines no [grid] or [monte_carlo] axes");
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
  try {
    return sweep_spec_from_toml(toml::parse_file(path));
  } catch (const toml::ParseError& e) {
    throw ConfigError(e.what());
  }
}

SweepResult run_sweep(const Scenario& base, const SweepSpec& spec, int count,
                      int jobs) {
  if (count < 1) throw ConfigError("sweep count must be >= 1");
  if (jobs < 1) jobs = 1;

  const size_t combos = spec.grid_size();
  const size_t total = combos * static_cast<size_t>(count);

  SweepResult result;
  result.runs.resize(total);
  for (size_t idx = 0; idx < total; ++idx) {
    SweepRun& run = result.runs[idx];
    run.index = idx;
    run.seed = base.rng_seed + idx;

    size_t combo = idx / static_cast<size_t>(count);
    for (const auto& axis : spec.grid) {
      const size_t pick = combo % axis.values.size();
      combo /= axis.values.size();
      run.overrides.emplace_back(axis.key, axis.values[pick]);
    }
    // Per-run draws come from a seed-derived stream so each run is
    // reproducible in isolation.
    std::mt19937_64 rng(run.seed ^ 0x5377656570ULL);
    for (const auto& axis : spec.random) {
      std::normal_distribution<double> dist(axis.mean, axis.std);
      run.overrides.emplace_back(axis.key, dist(rng));
    }
  }

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      SweepRun& run = result.runs[idx];
      try {
        Scenario sc = base;
        for (const auto& [key, value] : run.overrides) {
          set_scenario_value(sc, key, value);
        }
        sc.rng_seed = run.seed;
        run.report = run_scenario(sc).report;
        run.ok = true;
      } catch (const std::exception& e) {
        run.ok = false;
        run.error = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  const int n_threads = std::min<size_t>(jobs, total);
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& run : result.runs) {
    if (run.ok) {
      ++result.successes;
      if (run.report.success()) ++result.flight_ok;
    }
  }
  return result;
}

std::string sweep_to_csv(const SweepSpec& spec, const SweepResult& result) {
  std::vector<std::string> keys;
  for (const auto& axis : spec.grid) keys.push_back(axis.key);
  for (const auto& axis : spec.random) keys.push_back(axis.key);

  std::ostringstream out;
  out << "index,seed";
  for (const auto& key : keys) out << ',' << key;
  out << ",ok,success,tumbled,reached_position_control,apogee_altitude,"
         "apogee_time,max_tilt_ballistic_deg,final_drift,error\n";

  struct Stat {
    double sum = 0, sum2 = 0;
    size_t n = 0;
    void add(double v) { sum += v; sum2 += v * v; ++n; }
    double mean() const { return n ? sum / n : 0.0; }
    double stddev() const {
      if (n < 2) return 0.0;
      const double m = mean();
      return std::sqrt(std::max(0.0, sum2 / n - m * m));
    }
  };
  Stat apogee, tilt, drift;

  for (const auto& run : result.runs) {
    out << run.index << ',' << run.seed;
    for (const auto& [key, value] : run.overrides) {
      (void)key;
      out << ',' << fmt(value);
    }
    const RunReport& r = run.report;
    out << ',' << (run.ok ? 1 : 0);
    out << ',' << (run.ok && r.success() ? 1 : 0);
    out << ',' << (run.ok && r.tumbled ? 1 : 0);
    out << ',' << (run.ok && r.reached_position_control ? 1 : 0);
    out << ',' << (run.ok && r.apogee_altitude ? fmt(*r.apogee_altitude) : "");
    out << ',' << (run.ok && r.apogee_time ? fmt(*r.apogee_time) : "");
    out << ',' << (run.ok ? fmt(r.max_tilt_ballistic_deg) : "");
    out << ',' << (run.ok && r.final_drift ? fmt(*r.final_drift) : "");
    out << ',';
    for (char c : run.error) out << (c == ',' ? ';' : c);
    out << '\n';
    if (run.ok) {
      if (r.apogee_altitude) apogee.add(*r.apogee_altitude);
      tilt.add(r.max_tilt_ballistic_deg);
      if (r.final_drift) drift.add(*r.final_drift);
    }
  }

  const size_t total = result.runs.size();
  out << "# runs = " << total << "\n";
  out << "# completed_fraction = "
      << fmt(total ? double(result.successes) / total : 0.0) << "\n";
  out << "# success_fraction = "
      << fmt(total ? double(result.flight_ok) / total : 0.0) << "\n";
  out << "# apogee_altitude mean = " << fmt(apogee.mean())
      << " std = " << fmt(apogee.stddev()) << " n = " << apogee.n << "\n";
  out << "# max_tilt_ballistic_deg mean = " << fmt(tilt.mean())
      << " std = " << fmt(tilt.stddev()) << " n = " << tilt.n << "\n";
  out << "# final_drift mean = " << fmt(drift.mean())
      << " std = " << fmt(drift.stddev()) << " n = " << drift.n << "\n";
  return out.str();
}

}  // namespace tubesim
