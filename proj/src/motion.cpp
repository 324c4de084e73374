#include "hetsense/motion.hpp"

#include <cmath>

namespace hetsense {

RobotState step_robot(const RobotState& state, const RobotAction& action, double dt) {
  RobotState next = state;
  next.position.x += action.linear_velocity * std::cos(state.heading) * dt;
  next.position.y += action.linear_velocity * std::sin(state.heading) * dt;
  next.heading = wrap_angle(state.heading + action.angular_velocity * dt);
  return next;
}

TargetState step_target(const TargetState& state, double dt, NoiseSource& rng, double sigma) {
  TargetState next = state;
  const Vec2 v = state.drift();
  const double noise_scale = sigma * std::sqrt(dt);
  // Draw x then y so streams stay aligned across runs.
  const double wx = rng.gaussian(noise_scale);
  const double wy = rng.gaussian(noise_scale);
  next.position.x += v.x * dt + wx;
  next.position.y += v.y * dt + wy;
  next.phase_time += dt;
  return next;
}

}  // namespace hetsense
