#include "hetsense/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hetsense/motion.hpp"

namespace hetsense {

double hamiltonian(const RobotState& robot, Vec2 target_ref, const RobotAction& action,
                   const Costate& costate) {
  const double v = action.linear_velocity;
  const double w = action.angular_velocity;
  const double ex = robot.position.x - target_ref.x;
  const double ey = robot.position.y - target_ref.y;
  return costate[0] * v * std::cos(robot.heading) + costate[1] * v * std::sin(robot.heading) +
         costate[2] * w + 0.5 * (ex * ex + ey * ey + v * v + w * w);
}

double trajectory_cost(std::span<const RobotState> states, std::span<const RobotAction> actions,
                       std::span<const Vec2> target_traj, double dt) {
  double cost = 0.0;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    const double ex = states[k].position.x - target_traj[k].x;
    const double ey = states[k].position.y - target_traj[k].y;
    const double v = actions[k].linear_velocity;
    const double w = actions[k].angular_velocity;
    cost += 0.5 * (ex * ex + ey * ey + v * v + w * w) * dt;
  }
  return cost;
}

namespace {

void rollout(const RobotState& initial, std::span<const RobotAction> actions, double dt,
             std::vector<RobotState>& states) {
  states.resize(actions.size() + 1);
  states[0] = initial;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    states[k + 1] = step_robot(states[k], actions[k], dt);
  }
}

// lambda_k = lambda_{k+1} + dt dH/dx (x_k, u_k, lambda_{k+1}), lambda_H = 0.
void backward(std::span<const RobotState> states, std::span<const RobotAction> actions,
              std::span<const Vec2> target_traj, double dt, std::vector<Costate>& lambdas) {
  const std::size_t horizon = actions.size();
  lambdas.assign(horizon + 1, Costate{0.0, 0.0, 0.0});
  for (std::size_t k = horizon; k-- > 0;) {
    const Costate& next = lambdas[k + 1];
    const RobotState& x = states[k];
    const double v = actions[k].linear_velocity;
    const double s = std::sin(x.heading);
    const double c = std::cos(x.heading);
    lambdas[k] = {next[0] + dt * (x.position.x - target_traj[k].x),
                  next[1] + dt * (x.position.y - target_traj[k].y),
                  next[2] + dt * (-next[0] * v * s + next[1] * v * c)};
  }
}

RobotAction stationary_action(const RobotState& x, const Costate& next) {
  return {-(next[0] * std::cos(x.heading) + next[1] * std::sin(x.heading)), -next[2]};
}

double residual(std::span<const RobotState> states, std::span<const RobotAction> actions,
                std::span<const Costate> lambdas) {
  double worst = 0.0;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    const RobotAction star = stationary_action(states[k], lambdas[k + 1]);
    worst = std::max(worst, std::abs(actions[k].linear_velocity - star.linear_velocity));
    worst = std::max(worst, std::abs(actions[k].angular_velocity - star.angular_velocity));
  }
  return worst;
}

}  // namespace

ControlSolution solve_pmp(const RobotState& initial, std::span<const Vec2> target_traj, double dt,
                          const ControlOptions& options) {
  if (options.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const auto horizon = static_cast<std::size_t>(options.horizon);
  if (target_traj.size() < horizon) throw std::invalid_argument("target trajectory shorter than horizon");
  const auto ref = target_traj.first(horizon);

  ControlSolution sol;
  sol.actions.assign(horizon, RobotAction{});
  rollout(initial, sol.actions, dt, sol.states);
  backward(sol.states, sol.actions, ref, dt, sol.costates.lambdas);
  sol.stationarity_residual = residual(sol.states, sol.actions, sol.costates.lambdas);
  sol.cost_history.push_back(trajectory_cost(sol.states, sol.actions, ref, dt));

  while (sol.stationarity_residual >= options.tolerance && sol.iterations < options.max_iterations) {
    for (std::size_t k = 0; k < horizon; ++k) {
      const RobotAction star = stationary_action(sol.states[k], sol.costates.lambdas[k + 1]);
      RobotAction& a = sol.actions[k];
      a.linear_velocity += options.relaxation * (star.linear_velocity - a.linear_velocity);
      a.angular_velocity += options.relaxation * (star.angular_velocity - a.angular_velocity);
    }
    ++sol.iterations;
    rollout(initial, sol.actions, dt, sol.states);
    backward(sol.states, sol.actions, ref, dt, sol.costates.lambdas);
    sol.stationarity_residual = residual(sol.states, sol.actions, sol.costates.lambdas);
    sol.cost_history.push_back(trajectory_cost(sol.states, sol.actions, ref, dt));
  }
  sol.converged = sol.stationarity_residual < options.tolerance;

  bool clamped = false;
  for (RobotAction& a : sol.actions) {
    const double v = std::clamp(a.linear_velocity, -options.max_speed, options.max_speed);
    clamped = clamped || v != a.linear_velocity;
    a.linear_velocity = v;
  }
  if (clamped) rollout(initial, sol.actions, dt, sol.states);
  return sol;
}

}  // namespace hetsense
