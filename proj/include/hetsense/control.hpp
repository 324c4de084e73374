#pragma once

#include <array>
#include <span>
#include <vector>

#include "hetsense/scenario.hpp"

namespace hetsense {

/// (lambda1, lambda2, lambda3) for (x1, x2, theta).
using Costate = std::array<double, 3>;

struct CostateTrajectory {
  /// lambdas[k] for k = 0..horizon; lambdas[horizon] is the terminal (0, 0, 0).
  std::vector<Costate> lambdas;
};

struct ControlOptions {
  int horizon = 10;
  int max_iterations = 500;
  double tolerance = 1e-6;
  double relaxation = 0.1;
  /// Linear speed bound applied after the sweep converges.
  double max_speed = 2.0;
};

struct ControlSolution {
  std::vector<RobotAction> actions;  // size horizon
  std::vector<RobotState> states;    // size horizon + 1, states[0] is the initial state
  CostateTrajectory costates;
  /// Max over steps of |v + l1 cos + l2 sin| and |w + l3| before clamping.
  double stationarity_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Cost after every sweep iteration (first entry: initial guess).
  std::vector<double> cost_history;
};

/// l1 v cos(th) + l2 v sin(th) + l3 w + 0.5 [ |x - y|^2 + v^2 + w^2 ].
double hamiltonian(const RobotState& robot, Vec2 target_ref, const RobotAction& action,
                   const Costate& costate);

/// sum_k 0.5 (|x_k - y_k|^2 + v_k^2 + w_k^2) dt over k = 0..horizon-1.
double trajectory_cost(std::span<const RobotState> states, std::span<const RobotAction> actions,
                       std::span<const Vec2> target_traj, double dt);

/// Forward-backward sweep on the discretised necessary conditions.
/// Step k uses the Hamiltonian with the costate of step k+1, which makes the
/// update v <- v + alpha (v* - v) a gradient step on the Euler-discretised
/// cost. Iterates until the stationarity residual drops below the tolerance
/// or the iteration cap; non-convergence is reported, not thrown.
/// `target_traj` must hold at least `horizon` reference positions.
ControlSolution solve_pmp(const RobotState& initial, std::span<const Vec2> target_traj, double dt,
                          const ControlOptions& options = {});

}  // namespace hetsense
