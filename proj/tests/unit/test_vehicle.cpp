#include <doctest.h>

#include <cmath>
#include <random>

#include "tubesim/vehicle.hpp"

using namespace tubesim;

namespace {

DeploymentState at_angles(const VehicleConfig& c, double arm, double fin) {
  DeploymentState d = DeploymentState::folded(c.arm_count, c.fin_count);
  for (auto& a : d.arm_angles) a = arm;
  for (auto& a : d.fin_angles) a = fin;
  return d;
}

// Independent brute-force oracle: rebuild the point-mass list from scratch
// with a different code path and sum moments directly.
struct OracleResult {
  double com;
  double axial;
};

OracleResult lumped_oracle(const VehicleConfig& c, double arm, double fin) {
  struct P { double m, s, r; };
  std::vector<P> pts;
  pts.push_back({c.nose_battery_mass, c.battery_station, 0.0});
  pts.push_back({c.central_body_mass(), c.body_station, 0.0});
  for (int i = 0; i < c.arm_count; ++i) {
    pts.push_back({c.arm_mass,
                   c.arm_hinge_station + 0.5 * c.arm_length * std::cos(arm),
                   c.hull_radius + 0.5 * c.arm_length * std::sin(arm)});
  }
  for (int i = 0; i < c.fin_count; ++i) {
    pts.push_back({c.fin_mass,
                   c.fin_hinge_station + 0.5 * c.fin_length * std::cos(fin),
                   c.hull_radius + 0.5 * c.fin_length * std::sin(fin)});
  }
  double m = 0.0, ms = 0.0;
  for (auto& p : pts) { m += p.m; ms += p.m * p.s; }
  double axial = 0.5 * c.central_body_mass() * c.hull_radius * c.hull_radius;
  for (auto& p : pts) axial += p.m * p.r * p.r;
  return {ms / m, axial};
}

}  // namespace

TEST_CASE("default config is valid and conserves mass") {
  VehicleConfig c;
  c.validate();
  const double lump_sum = c.nose_battery_mass + c.central_body_mass() +
                          c.arm_count * c.arm_mass + c.fin_count * c.fin_mass;
  CHECK(lump_sum == doctest::Approx(c.total_mass).epsilon(1e-12));
}

TEST_CASE("deployed center of mass sits 24 cm from the nose") {
  VehicleConfig c;
  const auto mp =
      mass_properties(c, DeploymentState::deployed(c.arm_count, c.fin_count));
  CHECK(mp.com_from_nose == doctest::Approx(0.24).epsilon(1e-3));
}

TEST_CASE("deploying moves the center of mass toward the nose") {
  VehicleConfig c;
  const auto folded =
      mass_properties(c, DeploymentState::folded(c.arm_count, c.fin_count));
  const auto deployed =
      mass_properties(c, DeploymentState::deployed(c.arm_count, c.fin_count));
  CHECK(deployed.com_from_nose < folded.com_from_nose);
}

TEST_CASE("zero movable mass makes properties deployment-independent") {
  VehicleConfig c;
  c.arm_mass = 0.0;
  c.fin_mass = 0.0;
  const auto a =
      mass_properties(c, DeploymentState::folded(c.arm_count, c.fin_count));
  const auto b =
      mass_properties(c, DeploymentState::deployed(c.arm_count, c.fin_count));
  CHECK(a.com_from_nose == doctest::Approx(b.com_from_nose).epsilon(1e-12));
  CHECK(a.inertia_diag.isApprox(b.inertia_diag, 1e-12));
}

TEST_CASE("mass properties match the brute-force lumped oracle") {
  VehicleConfig c;
  for (double arm : {0.0, 0.3, 1.0, M_PI_2}) {
    for (double fin : {0.0, 0.7, M_PI_2}) {
      const auto mp = mass_properties(c, at_angles(c, arm, fin));
      const auto oracle = lumped_oracle(c, arm, fin);
      CHECK(mp.com_from_nose == doctest::Approx(oracle.com).epsilon(1e-12));
      CHECK(mp.axial_inertia() == doctest::Approx(oracle.axial).epsilon(1e-12));
    }
  }
}

TEST_CASE("axial inertia is monotone in each hinge angle") {
  VehicleConfig c;
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(0.0, M_PI_2);
  for (int trial = 0; trial < 200; ++trial) {
    double a1 = dist(rng), a2 = dist(rng);
    double f1 = dist(rng), f2 = dist(rng);
    if (a1 > a2) std::swap(a1, a2);
    if (f1 > f2) std::swap(f1, f2);
    const auto lo = mass_properties(c, at_angles(c, a1, f1));
    const auto hi = mass_properties(c, at_angles(c, a2, f2));
    CHECK(hi.axial_inertia() >= lo.axial_inertia() - 1e-12);
  }
}

TEST_CASE("deployed axial inertia exceeds folded") {
  VehicleConfig c;
  const auto folded =
      mass_properties(c, DeploymentState::folded(c.arm_count, c.fin_count));
  const auto deployed =
      mass_properties(c, DeploymentState::deployed(c.arm_count, c.fin_count));
  CHECK(deployed.axial_inertia() > folded.axial_inertia());
}

TEST_CASE("inertia entries positive and physically consistent") {
  VehicleConfig c;
  for (double arm : {0.0, 0.8, M_PI_2}) {
    const auto mp = mass_properties(c, at_angles(c, arm, arm));
    const auto& I = mp.inertia_diag;
    CHECK(I.x() > 0.0);
    CHECK(I.y() > 0.0);
    CHECK(I.z() > 0.0);
    // Triangle inequality for any rigid body.
    CHECK(I.x() + I.y() >= I.z());
    CHECK(I.y() + I.z() >= I.x());
    CHECK(I.z() + I.x() >= I.y());
    CHECK(mp.com_from_nose > 0.0);
    CHECK(mp.com_from_nose < c.body_length);
  }
}

TEST_CASE("hover thrust and implied max thrust") {
  VehicleConfig c;
  CHECK(hover_thrust(c) == doctest::Approx(32.37).epsilon(1e-3));
  CHECK(implied_max_thrust(c) == doctest::Approx(57.8).epsilon(2e-3));
}

TEST_CASE("hinge torque interpolates linearly between the endpoints") {
  VehicleConfig c;
  CHECK(hinge_torque(c, 0.0) == doctest::Approx(1.04));
  CHECK(hinge_torque(c, M_PI_2) == doctest::Approx(0.52));
  CHECK(hinge_torque(c, M_PI_4) == doctest::Approx(0.78));
  CHECK(c.hinge_torque_open == doctest::Approx(0.5 * c.hinge_torque_closed));
}

TEST_CASE("invalid configs are rejected") {
  VehicleConfig c;
  c.total_mass = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = VehicleConfig{};
  c.folded_diameter = c.unfolded_diameter;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = VehicleConfig{};
  c.max_total_thrust = 10.0;  // hover impossible
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = VehicleConfig{};
  c.arm_mass = 1.0;  // sum exceeds total
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("deployment state validation") {
  VehicleConfig c;
  DeploymentState d = DeploymentState::folded(c.arm_count, c.fin_count);
  d.arm_angles[0] = 2.0;  // beyond pi/2
  CHECK_THROWS_AS(mass_properties(c, d), std::invalid_argument);

  d = DeploymentState::folded(c.arm_count, c.fin_count);
  d.arm_latched[0] = true;  // latched but not open
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);

  CHECK_NOTHROW(DeploymentState::deployed(c.arm_count, c.fin_count).validate());
}
