#include <doctest.h>

#include <cmath>

#include "tubesim/sensors.hpp"

using namespace tubesim;

namespace {

SensorConfig quiet() {
  SensorConfig cfg;
  cfg.accel_noise_std = 0.0;
  cfg.gyro_noise_std = 0.0;
  cfg.baro_noise_std = 0.0;
  cfg.vio_noise_std = 0.0;
  cfg.vio_yaw_noise_std = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("21 g axial launch reads exactly 16 g") {
  SensorSuite suite(quiet());
  RigidBodyState truth;  // upright in the tube
  const Eigen::Vector3d accel_world(0.0, 0.0, 21.0 * kGravity - kGravity);
  const SensorFrame f = suite.sample(truth, accel_world, 0.01, 0.0);
  CHECK(f.accel.z() == 16.0 * kGravity);  // clipped, exactly
  CHECK(f.accel.x() == 0.0);
}

TEST_CASE("clipping is idempotent at the rail") {
  SensorSuite suite(quiet());
  RigidBodyState truth;
  const Eigen::Vector3d exactly_sat(0.0, 0.0, 16.0 * kGravity - kGravity);
  const SensorFrame f = suite.sample(truth, exactly_sat, 0.01, 0.0);
  CHECK(f.accel.z() == 16.0 * kGravity);
  const SensorFrame g = suite.sample(truth, 10.0 * exactly_sat, 0.02, 0.0);
  CHECK(g.accel.z() == 16.0 * kGravity);
}

TEST_CASE("static hover with noise disabled reads gravity only") {
  SensorSuite suite(quiet());
  RigidBodyState truth;
  truth.position = Eigen::Vector3d(0.0, 0.0, 5.0);
  const SensorFrame f =
      suite.sample(truth, Eigen::Vector3d::Zero(), 10.0, 0.0);
  CHECK(f.accel.isApprox(Eigen::Vector3d(0.0, 0.0, kGravity), 1e-12));
  CHECK(f.gyro.norm() == 0.0);
  CHECK(f.baro_valid);
  CHECK(f.baro_altitude == doctest::Approx(5.0));
  CHECK(f.range_valid);
  CHECK(f.range_distance == doctest::Approx(5.0));
}

TEST_CASE("baro invalid exactly during the blackout window") {
  SensorSuite suite(quiet());
  RigidBodyState truth;
  const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
  CHECK(suite.sample(truth, zero, 0.0, 0.0).baro_valid == false);
  CHECK(suite.sample(truth, zero, 2.9, 0.0).baro_valid == false);
  CHECK(suite.sample(truth, zero, 2.99, 0.0).baro_valid == false);
  CHECK(suite.sample(truth, zero, 3.0, 0.0).baro_valid == true);
  CHECK(suite.sample(truth, zero, 3.01, 0.0).baro_valid == true);
  // Before launch the barometer is fine.
  CHECK(suite.sample(truth, zero, 1.0, 2.0).baro_valid == true);
}

TEST_CASE("rangefinder respects range and field of view") {
  SensorConfig cfg = quiet();
  SensorSuite suite(cfg);
  RigidBodyState truth;
  const Eigen::Vector3d zero = Eigen::Vector3d::Zero();

  truth.position.z() = 59.0;
  CHECK(suite.sample(truth, zero, 5.0, 0.0).range_valid);
  truth.position.z() = 61.0;
  CHECK(!suite.sample(truth, zero, 5.1, 0.0).range_valid);

  // Tilted 70 degrees: the beam leaves the 60 degree cone about nadir.
  truth.position.z() = 10.0;
  truth.attitude = Eigen::Quaterniond(
      Eigen::AngleAxisd(70.0 * M_PI / 180.0, Eigen::Vector3d::UnitX()));
  CHECK(!suite.sample(truth, zero, 5.2, 0.0).range_valid);
  // 50 degrees: still inside, slant range = z / cos(tilt).
  truth.attitude = Eigen::Quaterniond(
      Eigen::AngleAxisd(50.0 * M_PI / 180.0, Eigen::Vector3d::UnitX()));
  const SensorFrame f = suite.sample(truth, zero, 5.3, 0.0);
  CHECK(f.range_valid);
  CHECK(f.range_distance ==
        doctest::Approx(10.0 / std::cos(50.0 * M_PI / 180.0)));
}

TEST_CASE("two-point variance oracle") {
  VioVarianceTracker tracker(1.0);
  CHECK(std::isinf(tracker.value()));
  tracker.add(0.00, 0.1, 0.0);
  CHECK(std::isinf(tracker.value()));  // one sample is not enough
  tracker.add(0.05, -0.1, 0.0);
  // Population variance of {+0.1, -0.1} is 0.01.
  CHECK(tracker.value() == doctest::Approx(0.01).epsilon(1e-12));

  VioVarianceTracker constant(1.0);
  for (int i = 0; i < 20; ++i) constant.add(i * 0.03, 0.7, -0.2);
  CHECK(constant.value() == doctest::Approx(0.0));
}

TEST_CASE("variance window slides") {
  VioVarianceTracker tracker(1.0);
  tracker.add(0.0, 5.0, 0.0);  // will fall out of the window
  for (int i = 0; i < 30; ++i) tracker.add(1.1 + i * 0.03, 1.0, 1.0);
  CHECK(tracker.value() == doctest::Approx(0.0));
}

TEST_CASE("vio is silent until gated on, then tracks truth") {
  SensorSuite suite(quiet());
  RigidBodyState truth;
  truth.position = Eigen::Vector3d(1.0, 2.0, 3.0);
  const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
  for (int i = 0; i < 50; ++i) {
    CHECK(!suite.sample(truth, zero, i * 0.01, 0.0).vio_valid);
  }
  suite.enable_vio(true);
  const SensorFrame f = suite.sample(truth, zero, 1.0, 0.0);
  CHECK(f.vio_valid);
  CHECK(f.vio_position.isApprox(truth.position, 1e-12));
  // Rate limiting: an immediate resample has no fresh pose.
  CHECK(!suite.sample(truth, zero, 1.001, 0.0).vio_valid);
}

TEST_CASE("noisy hover variance converges below the gate within 2 s") {
  SensorConfig cfg;  // default 2 cm noise
  cfg.rng_seed = 99;
  SensorSuite suite(cfg);
  RigidBodyState truth;
  truth.position = Eigen::Vector3d(0.0, 0.0, 8.0);
  suite.enable_vio(true);
  double var = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 500; ++i) {
    var = suite.sample(truth, Eigen::Vector3d::Zero(), i * 0.004, 0.0)
              .vio_variance_xy;
  }
  CHECK(var < 0.05);
}

TEST_CASE("identical seeds give identical streams") {
  SensorConfig cfg;
  cfg.rng_seed = 1234;
  SensorSuite a(cfg), b(cfg);
  RigidBodyState truth;
  truth.position = Eigen::Vector3d(0.0, 0.0, 4.0);
  a.enable_vio(true);
  b.enable_vio(true);
  for (int i = 0; i < 200; ++i) {
    const SensorFrame fa = a.sample(truth, Eigen::Vector3d::Zero(), i * 0.004, 0.0);
    const SensorFrame fb = b.sample(truth, Eigen::Vector3d::Zero(), i * 0.004, 0.0);
    CHECK((fa.accel - fb.accel).norm() == 0.0);
    CHECK((fa.gyro - fb.gyro).norm() == 0.0);
    CHECK(fa.baro_altitude == fb.baro_altitude);
    CHECK(fa.vio_valid == fb.vio_valid);
    CHECK((fa.vio_position - fb.vio_position).norm() == 0.0);
  }
}

TEST_CASE("config validation") {
  SensorConfig cfg;
  cfg.baro_noise_std = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SensorConfig{};
  cfg.range_max = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
