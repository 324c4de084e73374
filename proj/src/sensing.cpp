#include "hetsense/sensing.hpp"

#include <cmath>

#include "hetsense/errors.hpp"

namespace hetsense {

Measurement range_measurement(const RobotState& robot, const TargetState& target, double noise) {
  const double dx = target.position.x - robot.position.x;
  const double dy = target.position.y - robot.position.y;
  return {0.5 * (dy * dy + dx * dx) + noise, MeasurementKind::Range, 0, 0};
}

Measurement bearing_measurement(const RobotState& robot, const TargetState& target, double noise) {
  const double dx = target.position.x - robot.position.x;
  const double dy = target.position.y - robot.position.y;
  if (dx == 0.0 && dy == 0.0) {
    throw CoincidentPositions("bearing undefined: robot and target coincide");
  }
  return {wrap_angle(std::atan2(dy, dx) - robot.heading + noise), MeasurementKind::Bearing, 0, 0};
}

std::vector<MeasurementKind> sensor_kinds(RobotKind kind, LimitedSensorKind limited) {
  if (kind == RobotKind::Sufficient) return {MeasurementKind::Range, MeasurementKind::Bearing};
  if (limited == LimitedSensorKind::RangeOnly) return {MeasurementKind::Range};
  return {MeasurementKind::Bearing};
}

double noise_sigma(MeasurementKind kind, const ScenarioConfig& config) {
  return kind == MeasurementKind::Range ? config.range_noise_sigma : config.bearing_noise_sigma;
}

std::vector<Measurement> measure(const RobotState& robot, std::size_t robot_index,
                                 const TargetState& target, std::size_t target_index,
                                 NoiseSource& rng, const ScenarioConfig& config) {
  std::vector<Measurement> out;
  for (const MeasurementKind kind : sensor_kinds(robot.kind, config.limited_sensor_kind)) {
    const double noise = config.inject_noise ? rng.gaussian(noise_sigma(kind, config)) : 0.0;
    Measurement m = kind == MeasurementKind::Range ? range_measurement(robot, target, noise)
                                                   : bearing_measurement(robot, target, noise);
    m.robot_index = robot_index;
    m.target_index = target_index;
    out.push_back(m);
  }
  return out;
}

}  // namespace hetsense
