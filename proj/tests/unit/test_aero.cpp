#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tubesim/aero.hpp"

using namespace tubesim;

namespace {

DeploymentState fins_at(const VehicleConfig& c, double fin_angle) {
  DeploymentState d = DeploymentState::deployed(c.arm_count, c.fin_count);
  for (auto& a : d.fin_angles) a = fin_angle;
  std::fill(d.fin_settled.begin(), d.fin_settled.end(), false);
  return d;
}

// Independent recomputation of the normal-force-weighted AC position.
double ac_oracle(const AeroConfig& a, int fin_count, double fin_angle) {
  const double wb = a.reference_area * a.body_normal_slope;
  const double wf =
      fin_count * 0.5 * a.fin_area * a.fin_lift_slope * std::sin(fin_angle);
  return (wb * a.body_ac_from_nose + wf * a.fin_ac_from_nose) / (wb + wf);
}

AeroState state_with_aoa(double speed, double alpha) {
  // Body axis along world z; velocity tilted by alpha in the x-z plane gives
  // an angle of attack of alpha.
  AeroState s;
  s.velocity = speed * Eigen::Vector3d(std::sin(alpha), 0.0, std::cos(alpha));
  return s;
}

}  // namespace

TEST_CASE("deployed aerodynamic center lands 38 cm from the nose") {
  AeroConfig a;
  VehicleConfig v;
  const double ac =
      aerodynamic_center(a, v, DeploymentState::deployed(v.arm_count, v.fin_count));
  CHECK(ac == doctest::Approx(0.38).epsilon(0.01 / 0.38));
}

TEST_CASE("folded fins leave the body-alone aerodynamic center") {
  AeroConfig a;
  VehicleConfig v;
  const double ac =
      aerodynamic_center(a, v, DeploymentState::folded(v.arm_count, v.fin_count));
  CHECK(ac == doctest::Approx(a.body_ac_from_nose).epsilon(1e-12));
}

TEST_CASE("partially open fins interpolate, matching the weighting oracle") {
  AeroConfig a;
  VehicleConfig v;
  const double lo = aerodynamic_center(a, v, fins_at(v, 0.0));
  const double mid = aerodynamic_center(a, v, fins_at(v, M_PI_4));
  const double hi = aerodynamic_center(a, v, fins_at(v, M_PI_2));
  CHECK(lo < mid);
  CHECK(mid < hi);
  CHECK(mid == doctest::Approx(ac_oracle(a, v.fin_count, M_PI_4)).epsilon(1e-12));
}

TEST_CASE("static stability verdicts") {
  AeroConfig a;
  VehicleConfig v;
  const auto deployed =
      static_stability(a, v, DeploymentState::deployed(v.arm_count, v.fin_count));
  CHECK(deployed.static_margin == doctest::Approx(0.14).epsilon(0.02 / 0.14));
  CHECK(deployed.stable);
  CHECK(deployed.static_margin ==
        doctest::Approx(deployed.ac_from_nose - deployed.com_from_nose));

  // A heavy tail battery drags the COM aft of the AC.
  VehicleConfig tail_heavy = v;
  tail_heavy.nose_battery_mass = 1.2;
  tail_heavy.battery_station = 0.75;
  const auto unstable = static_stability(
      a, tail_heavy, DeploymentState::deployed(v.arm_count, v.fin_count));
  CHECK(unstable.static_margin < 0.0);
  CHECK(!unstable.stable);
}

TEST_CASE("zero apparent wind and zero rates produce a zero wrench") {
  AeroConfig a;
  VehicleConfig v;
  AeroState s;  // at rest
  const Wrench w =
      aero_wrench(a, v, DeploymentState::deployed(v.arm_count, v.fin_count), s,
                  Eigen::Vector3d::Zero());
  CHECK(w.force.norm() == 0.0);
  CHECK(w.moment.norm() == 0.0);
}

TEST_CASE("restoring moment magnitude matches the hand formula at 10 deg") {
  AeroConfig a;
  VehicleConfig v;
  const auto deploy = DeploymentState::deployed(v.arm_count, v.fin_count);
  const double speed = 10.0;
  const double alpha = 10.0 * M_PI / 180.0;
  const AeroState s = state_with_aoa(speed, alpha);
  const Wrench w = aero_wrench(a, v, deploy, s, Eigen::Vector3d::Zero());

  const double q = 0.5 * a.air_density * speed * speed;
  const double weight = normal_force_weight(a, deploy);
  const double margin = static_stability(a, v, deploy).static_margin;
  const double expected = q * weight * alpha * margin;
  // Velocity tilted toward +x: the restoring moment is a pure pitch (+y here)
  // that pushes the nose toward the apparent wind.
  CHECK(w.moment.norm() == doctest::Approx(expected).epsilon(1e-9));
  CHECK(w.moment.y() == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("folded restoring moment is weaker than deployed") {
  AeroConfig a;
  VehicleConfig v;
  const AeroState s = state_with_aoa(10.0, 10.0 * M_PI / 180.0);
  const Wrench open = aero_wrench(
      a, v, DeploymentState::deployed(v.arm_count, v.fin_count), s,
      Eigen::Vector3d::Zero());
  const Wrench closed = aero_wrench(
      a, v, DeploymentState::folded(v.arm_count, v.fin_count), s,
      Eigen::Vector3d::Zero());
  CHECK(closed.moment.norm() < open.moment.norm());
}

TEST_CASE("moment sign follows the static margin for all pre-stall angles") {
  AeroConfig a;
  VehicleConfig v;
  VehicleConfig aft = v;
  aft.nose_battery_mass = 1.2;  // negative margin variant: battery in the tail
  aft.battery_station = 0.75;
  const auto deploy = DeploymentState::deployed(v.arm_count, v.fin_count);
  for (double deg = 1.0; deg < 24.5; deg += 2.0) {
    const double alpha = deg * M_PI / 180.0;
    const AeroState s = state_with_aoa(12.0, alpha);
    const Wrench stable = aero_wrench(a, v, deploy, s, Eigen::Vector3d::Zero());
    const Wrench divergent =
        aero_wrench(a, aft, deploy, s, Eigen::Vector3d::Zero());
    // +y moment rotates the nose toward the velocity (reduces alpha).
    CHECK(stable.moment.y() > 0.0);
    CHECK(divergent.moment.y() < 0.0);
  }
}

TEST_CASE("deep-stall autorotation drives along the tumble direction") {
  AeroConfig a;
  VehicleConfig v;
  const auto deploy = DeploymentState::deployed(v.arm_count, v.fin_count);
  AeroState s = state_with_aoa(15.0, 60.0 * M_PI / 180.0);
  s.angular_rate = Eigen::Vector3d(0.0, 2.0, 0.0);

  AeroConfig off = a;
  off.autorotation_coeff = 0.0;
  const Wrench with = aero_wrench(a, v, deploy, s, Eigen::Vector3d::Zero());
  const Wrench without = aero_wrench(off, v, deploy, s, Eigen::Vector3d::Zero());
  const Eigen::Vector3d delta = with.moment - without.moment;
  // The extra moment points along the transverse rate and matches the
  // closed form q * coeff * body fraction (full ramp at 60 deg).
  CHECK(delta.y() > 0.0);
  CHECK(delta.x() == doctest::Approx(0.0).epsilon(1e-12));
  const double q = 0.5 * a.air_density * 15.0 * 15.0;
  const double body_frac = a.reference_area * a.body_normal_slope /
                           normal_force_weight(a, deploy);
  CHECK(delta.y() ==
        doctest::Approx(q * a.autorotation_coeff * body_frac).epsilon(1e-9));

  // Below stall the term is inactive.
  AeroState low = state_with_aoa(15.0, 10.0 * M_PI / 180.0);
  low.angular_rate = s.angular_rate;
  const Wrench calm = aero_wrench(a, v, deploy, low, Eigen::Vector3d::Zero());
  const Wrench calm0 = aero_wrench(off, v, deploy, low, Eigen::Vector3d::Zero());
  CHECK((calm.moment - calm0.moment).norm() == doctest::Approx(0.0));
}

TEST_CASE("drag opposes the apparent wind") {
  AeroConfig a;
  VehicleConfig v;
  const auto deploy = DeploymentState::deployed(v.arm_count, v.fin_count);
  // Pure axial flow isolates the drag term.
  for (double dir : {1.0, -1.0}) {
    AeroState s;
    s.velocity = Eigen::Vector3d(0.0, 0.0, dir * 15.0);
    const Wrench w = aero_wrench(a, v, deploy, s, Eigen::Vector3d::Zero());
    CHECK(w.force.dot(s.velocity) < 0.0);
  }
  // And with an angle of attack the total force still opposes the motion.
  const AeroState s = state_with_aoa(12.0, 0.2);
  const Wrench w = aero_wrench(a, v, deploy, s, Eigen::Vector3d::Zero());
  CHECK(w.force.dot(s.velocity) < 0.0);
}

TEST_CASE("nosecone halves the axial drag") {
  AeroConfig a;
  VehicleConfig v;
  const auto deploy = DeploymentState::folded(v.arm_count, v.fin_count);
  AeroState s;
  s.velocity = Eigen::Vector3d(0.0, 0.0, 12.0);  // nose-first flow
  const Wrench nose = aero_wrench(a, v, deploy, s, Eigen::Vector3d::Zero());

  AeroConfig bluff = a;
  bluff.body_drag_coeff_nosecone = a.body_drag_coeff_bluff * 0.999;
  bluff.body_drag_coeff_bluff = a.body_drag_coeff_bluff * 1.999;
  const Wrench blunt = aero_wrench(bluff, v, deploy, s, Eigen::Vector3d::Zero());
  const double ratio = nose.force.norm() / blunt.force.norm();
  CHECK(ratio == doctest::Approx(0.5).epsilon(0.10));
}

TEST_CASE("wrench is continuous through the latch angle") {
  AeroConfig a;
  VehicleConfig v;
  const AeroState s = state_with_aoa(12.0, 0.15);
  const double eps = 1e-7;
  const Wrench just_below =
      aero_wrench(a, v, fins_at(v, M_PI_2 - eps), s, Eigen::Vector3d::Zero());
  const Wrench at_latch =
      aero_wrench(a, v, fins_at(v, M_PI_2), s, Eigen::Vector3d::Zero());
  CHECK((just_below.force - at_latch.force).norm() < 1e-5);
  CHECK((just_below.moment - at_latch.moment).norm() < 1e-5);
}

TEST_CASE("config validation enforces the nosecone ratio") {
  AeroConfig a;
  a.body_drag_coeff_nosecone = a.body_drag_coeff_bluff;  // ratio 1.0
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);

  a = AeroConfig{};
  a.fin_area = 0.0;
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
}
