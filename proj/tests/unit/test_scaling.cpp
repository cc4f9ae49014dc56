#include <doctest.h>

#include <cmath>

#include "tubesim/aero.hpp"
#include "tubesim/dynamics.hpp"
#include "tubesim/launcher.hpp"
#include "tubesim/scaling.hpp"

using namespace tubesim;

TEST_CASE("froude number of the full-scale launch") {
  CHECK(froude_number(12.0, 0.79) == doctest::Approx(4.31).epsilon(1e-3));
  CHECK(froude_number(0.0, 0.79) == 0.0);
  CHECK_THROWS_AS(froude_number(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(froude_number(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("froude number is invariant under the scale map") {
  for (double lambda : {1.5, 2.0, 3.0, 5.0}) {
    const double full = froude_number(12.0, 0.79);
    const double sub = froude_number(12.0 / std::sqrt(lambda), 0.79 / lambda);
    CHECK(sub == doctest::Approx(full).epsilon(1e-12));
  }
}

TEST_CASE("trajectory scaling hits the tabulated speeds") {
  ScaleMap map;
  map.length_factor = 3.0;
  std::vector<TrajectoryPoint> traj(2);
  traj[0].velocity = Eigen::Vector3d(0.0, 0.0, 4.5);
  traj[1].velocity = Eigen::Vector3d(0.0, 0.0, 10.0);
  traj[1].time = 1.0;
  traj[1].position = Eigen::Vector3d(0.5, 0.0, 2.0);
  const auto full = scale_trajectory(traj, map);
  CHECK(full[0].velocity.z() == doctest::Approx(7.79).epsilon(0.01 / 7.79));
  CHECK(full[1].velocity.z() == doctest::Approx(17.32).epsilon(0.01 / 17.32));
  CHECK(full[1].time == doctest::Approx(std::sqrt(3.0)));
  CHECK(full[1].position.isApprox(3.0 * traj[1].position, 1e-12));
}

TEST_CASE("scaling up then down is the identity") {
  ScaleMap up, down;
  up.length_factor = 3.0;
  down.length_factor = 1.0 / 3.0;
  std::vector<TrajectoryPoint> traj(1);
  traj[0].time = 2.5;
  traj[0].position = Eigen::Vector3d(1.0, -2.0, 7.0);
  traj[0].velocity = Eigen::Vector3d(0.4, 0.1, -9.0);
  const auto back = scale_trajectory(scale_trajectory(traj, up), down);
  CHECK(back[0].time == doctest::Approx(traj[0].time).epsilon(1e-12));
  CHECK(back[0].position.isApprox(traj[0].position, 1e-12));
  CHECK(back[0].velocity.isApprox(traj[0].velocity, 1e-12));

  ScaleMap bad;
  bad.length_factor = 0.0;
  CHECK_THROWS_AS(scale_trajectory(traj, bad), std::invalid_argument);
}

TEST_CASE("one-third scale vehicle geometry and mass") {
  VehicleConfig v;
  AeroConfig a;
  const auto sub = subscale_config(v, a, 3.0);
  CHECK(sub.vehicle.folded_diameter == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(sub.vehicle.total_mass == doctest::Approx(3.3 / 27.0).epsilon(1e-12));
  CHECK(sub.vehicle.body_length == doctest::Approx(0.79 / 3.0).epsilon(1e-12));
  sub.vehicle.validate();
  sub.aero.validate();

  // The scaled model keeps its stability, with the margin shrunk by lambda.
  const auto full_report = static_stability(
      a, v, DeploymentState::deployed(v.arm_count, v.fin_count));
  const auto sub_report = static_stability(
      sub.aero, sub.vehicle,
      DeploymentState::deployed(sub.vehicle.arm_count, sub.vehicle.fin_count));
  CHECK(sub_report.static_margin == doctest::Approx(0.05).epsilon(0.01 / 0.05));
  CHECK(sub_report.static_margin ==
        doctest::Approx(full_report.static_margin / 3.0).epsilon(1e-9));
  CHECK(sub_report.stable);
}

TEST_CASE("mass override pins the total and rescales the lumps") {
  VehicleConfig v;
  AeroConfig a;
  const auto sub = subscale_config(v, a, 3.0, 0.15);
  CHECK(sub.vehicle.total_mass == 0.15);
  // Component fractions are preserved.
  CHECK(sub.vehicle.nose_battery_mass / sub.vehicle.total_mass ==
        doctest::Approx(v.nose_battery_mass / v.total_mass).epsilon(1e-12));
  CHECK(sub.vehicle.arm_mass / sub.vehicle.total_mass ==
        doctest::Approx(v.arm_mass / v.total_mass).epsilon(1e-12));
  sub.vehicle.validate();

  CHECK_THROWS_AS(subscale_config(v, a, 0.0), std::invalid_argument);
}

TEST_CASE("scaled launcher reproduces the Froude exit speed") {
  LauncherConfig launcher;
  VehicleConfig vehicle;
  AeroConfig aero;
  const double lambda = 3.0;
  const auto sub = subscale_config(vehicle, aero, lambda);
  const LauncherConfig sub_launcher = subscale_launcher(launcher, lambda);

  // Gauge pressure down by lambda, geometry by the length rules.
  CHECK(sub_launcher.chamber_pressure - launcher.ambient_pressure ==
        doctest::Approx((launcher.chamber_pressure - launcher.ambient_pressure) /
                        lambda)
            .epsilon(1e-12));
  CHECK(sub_launcher.tube_length ==
        doctest::Approx(launcher.tube_length / lambda).epsilon(1e-12));

  const ExitState full = simulate_tube_phase(launcher, vehicle);
  const ExitState small = simulate_tube_phase(sub_launcher, sub.vehicle);
  CHECK(small.exit_speed ==
        doctest::Approx(full.exit_speed / std::sqrt(lambda)).epsilon(0.01));
}

TEST_CASE("drag-free ballistics commute with the scale map") {
  VehicleConfig v;
  AeroConfig a;
  const double lambda = 3.0;
  const auto sub = subscale_config(v, a, lambda);
  const WrenchHook none = [](const RigidBodyState&, const DeploymentState&,
                             double) { return Wrench{}; };

  const double dt_full = 2e-3;
  const double dt_sub = dt_full / std::sqrt(lambda);
  const int n = 800;

  Integrator full_integ(v);
  RigidBodyState full_state;
  full_state.velocity = Eigen::Vector3d(2.0, -1.0, 12.0);
  DeploymentState full_dep = DeploymentState::deployed(v.arm_count, v.fin_count);

  Integrator sub_integ(sub.vehicle);
  RigidBodyState sub_state;
  sub_state.velocity = full_state.velocity / std::sqrt(lambda);
  DeploymentState sub_dep =
      DeploymentState::deployed(sub.vehicle.arm_count, sub.vehicle.fin_count);

  for (int k = 0; k < n; ++k) {
    full_integ.step(full_state, full_dep, none, k * dt_full, dt_full);
    sub_integ.step(sub_state, sub_dep, none, k * dt_sub, dt_sub);
  }
  // Matched nondimensional time: positions related by lambda exactly.
  CHECK((full_state.position - lambda * sub_state.position).norm() <
        1e-9 * std::max(1.0, full_state.position.norm()));
  CHECK((full_state.velocity - std::sqrt(lambda) * sub_state.velocity).norm() <
        1e-9);
}

TEST_CASE("aerodynamic flight commutes with the scale map") {
  VehicleConfig v;
  AeroConfig a;
  const double lambda = 3.0;
  const auto sub = subscale_config(v, a, lambda);

  auto fly = [](const VehicleConfig& vc, const AeroConfig& ac,
                const Eigen::Vector3d& v0, const Eigen::Vector3d& w0,
                double dt, int n) {
    Integrator integ(vc);
    RigidBodyState s;
    s.velocity = v0;
    s.angular_rate = w0;
    s.attitude = Eigen::Quaterniond(
        Eigen::AngleAxisd(0.1, Eigen::Vector3d::UnitX()));
    DeploymentState d = DeploymentState::deployed(vc.arm_count, vc.fin_count);
    const WrenchHook hook = [&vc, &ac](const RigidBodyState& st,
                                       const DeploymentState& dep, double) {
      AeroState as;
      as.velocity = st.velocity;
      as.attitude = st.attitude;
      as.angular_rate = st.angular_rate;
      return aero_wrench(ac, vc, dep, as, Eigen::Vector3d::Zero());
    };
    for (int k = 0; k < n; ++k) integ.step(s, d, hook, k * dt, dt);
    return s;
  };

  const double dt_full = 2e-3;
  const int n = 800;
  const Eigen::Vector3d v0(1.0, 0.5, 12.0);
  const Eigen::Vector3d w0(0.2, -0.1, 0.4);
  const RigidBodyState full = fly(v, a, v0, w0, dt_full, n);
  const RigidBodyState small =
      fly(sub.vehicle, sub.aero, v0 / std::sqrt(lambda), w0 * std::sqrt(lambda),
          dt_full / std::sqrt(lambda), n);

  CHECK((full.position - lambda * small.position).norm() /
            full.position.norm() <
        1e-6);
  CHECK((full.velocity - std::sqrt(lambda) * small.velocity).norm() /
            full.velocity.norm() <
        1e-6);
  CHECK(full.attitude.angularDistance(small.attitude) < 1e-6);
  CHECK((full.angular_rate - small.angular_rate / std::sqrt(lambda)).norm() <
        1e-6);
}
