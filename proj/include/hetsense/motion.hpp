#pragma once

#include "hetsense/scenario.hpp"

namespace hetsense {

/// Forward-Euler unicycle step; heading is re-wrapped to (-pi, pi].
RobotState step_robot(const RobotState& state, const RobotAction& action, double dt);

/// Euler step of the circular drift evaluated at the current phase time,
/// plus N(0, sigma^2 dt) per axis. The phase time advances by dt.
TargetState step_target(const TargetState& state, double dt, NoiseSource& rng, double sigma);

}  // namespace hetsense
