#pragma once

#include <cstddef>
#include <vector>

#include "hetsense/scenario.hpp"

namespace hetsense {

enum class MeasurementKind { Range, Bearing };

struct Measurement {
  // Range values are half the squared distance (m^2); bearings are radians.
  double value = 0.0;
  MeasurementKind kind = MeasurementKind::Range;
  std::size_t robot_index = 0;
  std::size_t target_index = 0;
};

/// 0.5 * |y - x|^2 + noise.
Measurement range_measurement(const RobotState& robot, const TargetState& target, double noise);

/// atan2(dy, dx) - heading + noise, wrapped. Throws CoincidentPositions.
Measurement bearing_measurement(const RobotState& robot, const TargetState& target, double noise);

/// Modalities carried by a robot: sufficient robots have range and bearing,
/// limited robots only the configured one.
std::vector<MeasurementKind> sensor_kinds(RobotKind kind, LimitedSensorKind limited);

/// Noise standard deviation used for a modality.
double noise_sigma(MeasurementKind kind, const ScenarioConfig& config);

/// All measurements a robot takes of a target, each with independent noise
/// (zero noise when config.inject_noise is false).
std::vector<Measurement> measure(const RobotState& robot, std::size_t robot_index,
                                 const TargetState& target, std::size_t target_index,
                                 NoiseSource& rng, const ScenarioConfig& config);

}  // namespace hetsense
