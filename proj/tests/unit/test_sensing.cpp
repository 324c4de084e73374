#include <cmath>

#include "doctest.h"
#include "hetsense/errors.hpp"
#include "hetsense/sensing.hpp"

using namespace hetsense;

namespace {
RobotState robot(double x, double y, double heading = 0.0, RobotKind kind = RobotKind::Sufficient) {
  return RobotState{{x, y}, heading, kind};
}
TargetState target(double x, double y) { return TargetState{{x, y}, 20.0, 0.1, 0.0}; }
}  // namespace

TEST_CASE("range measurement is half the squared distance") {
  CHECK(range_measurement(robot(0, 0), target(3, 4), 0.0).value == 12.5);
  CHECK(range_measurement(robot(1, 1), target(1, 1), 0.0).value == 0.0);
  CHECK(range_measurement(robot(0, 0), target(1, 0), 0.1).value == doctest::Approx(0.6));
  CHECK(range_measurement(robot(0, 0), target(1, 0), 0.0).kind == MeasurementKind::Range);
}

TEST_CASE("bearing measurement") {
  CHECK(bearing_measurement(robot(0, 0), target(1, 1), 0.0).value == doctest::Approx(kPi / 4));
  CHECK(bearing_measurement(robot(0, 0, kPi / 4), target(1, 1), 0.0).value == doctest::Approx(0.0));
  CHECK(bearing_measurement(robot(0, 0), target(-1, 0), 0.0).value == doctest::Approx(kPi));
  CHECK_THROWS_AS(bearing_measurement(robot(2, 2), target(2, 2), 0.0), CoincidentPositions);
}

TEST_CASE("range is heading invariant") {
  for (double h = -3.0; h < 3.0; h += 0.5) {
    CHECK(range_measurement(robot(1, -2, h), target(4, 2), 0.0).value == 12.5);
  }
}

TEST_CASE("bearing equals (alpha - theta) wrapped on a 16x16 grid") {
  for (int i = 0; i < 16; ++i) {
    const double alpha = -kPi + (i + 0.5) * 2.0 * kPi / 16.0;
    for (int j = 0; j < 16; ++j) {
      const double theta = -kPi + (j + 0.5) * 2.0 * kPi / 16.0;
      const double z = bearing_measurement(robot(1, 2, theta),
                                           target(1 + 3 * std::cos(alpha), 2 + 3 * std::sin(alpha)), 0.0)
                           .value;
      CHECK(z > -kPi);
      CHECK(z <= kPi);
      CHECK(std::abs(std::remainder(z - (alpha - theta), 2.0 * kPi)) < 1e-12);
    }
  }
}

TEST_CASE("measure returns the robot's modalities") {
  ScenarioConfig c;
  NoiseSource rng(1, 1);
  const auto suff = measure(robot(0, 0), 0, target(3, 4), 1, rng, c);
  REQUIRE(suff.size() == 2);
  CHECK(suff[0].kind == MeasurementKind::Range);
  CHECK(suff[1].kind == MeasurementKind::Bearing);
  CHECK(suff[1].robot_index == 0);
  CHECK(suff[1].target_index == 1);

  const auto lim = measure(robot(0, 0, 0, RobotKind::Limited), 3, target(3, 4), 0, rng, c);
  REQUIRE(lim.size() == 1);
  CHECK(lim[0].kind == MeasurementKind::Range);

  c.limited_sensor_kind = LimitedSensorKind::BearingOnly;
  const auto lim_b = measure(robot(0, 0, 0, RobotKind::Limited), 3, target(3, 4), 0, rng, c);
  REQUIRE(lim_b.size() == 1);
  CHECK(lim_b[0].kind == MeasurementKind::Bearing);
}

TEST_CASE("measure without noise matches the noiseless models") {
  ScenarioConfig c;
  c.inject_noise = false;
  NoiseSource rng(1, 1);
  const auto z = measure(robot(0.5, -1, 0.3), 0, target(3, 4), 0, rng, c);
  CHECK(z[0].value == range_measurement(robot(0.5, -1, 0.3), target(3, 4), 0.0).value);
  CHECK(z[1].value == bearing_measurement(robot(0.5, -1, 0.3), target(3, 4), 0.0).value);
}

TEST_CASE("measurement noise is reproducible") {
  ScenarioConfig c;
  NoiseSource a(11, 1), b(11, 1);
  for (int i = 0; i < 20; ++i) {
    const auto za = measure(robot(0, 0), 0, target(3, 4), 0, a, c);
    const auto zb = measure(robot(0, 0), 0, target(3, 4), 0, b, c);
    CHECK(za[0].value == zb[0].value);
    CHECK(za[1].value == zb[1].value);
  }
}
