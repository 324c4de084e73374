#include "hetsense/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hetsense/errors.hpp"
#include "hetsense/kernels.hpp"
#include "hetsense/motion.hpp"
#include "hetsense/observability.hpp"
#include "hetsense/sensing.hpp"

namespace hetsense {

std::optional<double> StepRecord::ratio() const {
  if (!optimal_total_shifted) return std::nullopt;
  if (*optimal_total_shifted == 0.0) return greedy_total_shifted == 0.0 ? 1.0 : 0.0;
  return greedy_total_shifted / *optimal_total_shifted;
}

QualityTable build_quality_table(std::span<const RobotState> robots,
                                 std::span<const TargetState> target_models,
                                 std::span<const EkfBelief> beliefs, const ScenarioConfig& config) {
  if (beliefs.size() != target_models.size()) {
    throw std::invalid_argument("one belief per target required");
  }
  const auto units = enumerate_units(config.n_sufficient, config.n_limited);
  const int n_targets = static_cast<int>(target_models.size());
  QualityTable table(units, n_targets);

  std::vector<std::size_t> solo_idx, pair_idx;
  for (std::size_t u = 0; u < units.size(); ++u) (units[u].is_pair() ? pair_idx : solo_idx).push_back(u);

  const bool bearing_pairs = config.limited_sensor_kind == LimitedSensorKind::BearingOnly;
  auto limited_row = [&](const RobotState& r, Vec2 y) -> Row2 {
    const double dx = y.x - r.position.x;
    const double dy = y.y - r.position.y;
    if (!bearing_pairs) return {dx, dy};
    const double n2 = dx * dx + dy * dy;
    return {-dy / n2, dx / n2};
  };

  // Candidate-major SoA buffers, one lane per (unit, target).
  const std::size_t ns = solo_idx.size() * target_models.size();
  std::vector<double> dx(ns), dy(ns), ux(ns), uy(ns), det_s(ns);
  const std::size_t np = pair_idx.size() * target_models.size();
  std::vector<double> r1x(np), r1y(np), r2x(np), r2y(np), r3x(np), r3y(np), det_p(np);

  std::size_t i = 0;
  for (const std::size_t u : solo_idx) {
    const RobotState& r = robots[static_cast<std::size_t>(units[u].first())];
    for (std::size_t t = 0; t < target_models.size(); ++t, ++i) {
      const Vec2 drift = target_models[t].drift();
      dx[i] = beliefs[t].mean.x() - r.position.x;
      dy[i] = beliefs[t].mean.y() - r.position.y;
      ux[i] = drift.x;
      uy[i] = drift.y;
    }
  }
  i = 0;
  for (const std::size_t u : pair_idx) {
    const RobotState& a = robots[static_cast<std::size_t>(units[u].first())];
    const RobotState& b = robots[static_cast<std::size_t>(units[u].second())];
    for (std::size_t t = 0; t < target_models.size(); ++t, ++i) {
      const Vec2 y{beliefs[t].mean.x(), beliefs[t].mean.y()};
      const Row2 ra = limited_row(a, y);
      const Row2 rb = limited_row(b, y);
      const Row2 rm = pair_motion_row(target_models[t]);
      r1x[i] = ra[0];
      r1y[i] = ra[1];
      r2x[i] = rb[0];
      r2y[i] = rb[1];
      r3x[i] = rm[0];
      r3y[i] = rm[1];
    }
  }

  kernels::single_robot_gram_det({dx, dy, ux, uy}, det_s);
  kernels::three_row_gram_det({r1x, r1y, r2x, r2y, r3x, r3y}, det_p);

  i = 0;
  for (const std::size_t u : solo_idx) {
    for (int t = 0; t < n_targets; ++t, ++i) table.set(u, t, quality_from_det(det_s[i]));
  }
  i = 0;
  for (const std::size_t u : pair_idx) {
    for (int t = 0; t < n_targets; ++t, ++i) table.set(u, t, quality_from_det(det_p[i]));
  }
  return table;
}

double cumulative_rmse(std::span<const double> errors, int step) {
  if (step < 1 || static_cast<std::size_t>(step) > errors.size()) {
    throw std::out_of_range("rmse step outside record range");
  }
  double sum = 0.0;
  for (int k = 0; k < step; ++k) sum += errors[static_cast<std::size_t>(k)] * errors[static_cast<std::size_t>(k)];
  return std::sqrt(sum / step);
}

RunSummary summarize(std::span<const StepRecord> steps) {
  RunSummary s;
  for (const int c : kRmseCheckpoints) {
    if (static_cast<std::size_t>(c) <= steps.size()) s.checkpoints.push_back(c);
  }
  const std::size_t n_targets = steps.empty() ? 0 : steps.front().targets.size();
  s.rmse.assign(n_targets, {});
  for (std::size_t t = 0; t < n_targets; ++t) {
    std::vector<double> errors;
    errors.reserve(steps.size());
    for (const StepRecord& r : steps) errors.push_back(r.targets[t].error);
    for (const int c : s.checkpoints) s.rmse[t].push_back(cumulative_rmse(errors, c));
  }
  if (!steps.empty()) s.final_ratio = steps.back().ratio();

  for (const StepRecord& r : steps) {
    for (const RobotRecord& rr : r.robots) {
      if (!rr.target) continue;
      ++s.control.solves;
      s.control.max_residual = std::max(s.control.max_residual, rr.residual);
      if (rr.converged) {
        ++s.control.converged;
        s.control.max_residual_converged = std::max(s.control.max_residual_converged, rr.residual);
      }
      s.control.all_terminal_costates_zero = s.control.all_terminal_costates_zero && rr.terminal_costate_zero;
    }
  }
  return s;
}

namespace {

double shifted_total(const Assignment& a, const QualityTable& shifted) {
  return assignment_total(a, shifted);
}

void check_robot_conservation(const Assignment& a, std::size_t n_robots) {
  validate_assignment(a);
  for (const auto& [t, unit] : a) {
    if (static_cast<std::size_t>(unit.first()) >= n_robots ||
        (unit.is_pair() && static_cast<std::size_t>(unit.second()) >= n_robots)) {
      throw InvariantViolation("assignment references unknown robot");
    }
  }
}

// Belief mean rolled forward by the known drift over the control horizon.
std::vector<Vec2> reference_trajectory(const EkfBelief& belief, TargetState model, double dt,
                                       int horizon) {
  std::vector<Vec2> ref;
  ref.reserve(static_cast<std::size_t>(horizon));
  Vec2 y{belief.mean.x(), belief.mean.y()};
  for (int k = 0; k < horizon; ++k) {
    ref.push_back(y);
    y = y + dt * model.drift();
    model.phase_time += dt;
  }
  return ref;
}

}  // namespace

RunResult run(const ScenarioConfig& config, Policy policy) {
  config.validate();
  if (policy != Policy::Greedy) {
    const auto n_units = enumerate_units(config.n_sufficient, config.n_limited).size();
    if (config.n_targets > kOptimalMaxTargets || n_units > kOptimalMaxUnits) {
      throw InstanceTooLarge("scenario too large for the optimal policy");
    }
  }

  WorldState world = build_scenario(config);
  NoiseSource noise(config.seed, /*stream=*/1);
  std::vector<EkfBelief> beliefs;
  for (const TargetState& t : world.targets) beliefs.push_back(initial_belief(t.position));

  const MeasurementNoise meas_noise = MeasurementNoise::from_config(config);
  const Eigen::Matrix2d process_cov =
      config.process_noise_sigma * config.process_noise_sigma * Eigen::Matrix2d::Identity();
  const double truth_sigma = config.inject_noise ? config.process_noise_sigma : 0.0;
  ControlOptions control;
  control.max_speed = config.robot_max_speed;

  RunResult result;
  result.steps.reserve(static_cast<std::size_t>(config.time_steps));

  for (int k = 1; k <= config.time_steps; ++k) {
    StepRecord rec;
    rec.step = k;

    // (1) quality table and (2) assignment
    const QualityTable table = build_quality_table(world.robots, world.targets, beliefs, config);
    const QualityTable shifted = table.shifted_nonnegative();
    rec.quality_shift = table.min_finite();

    const AssignResult greedy = greedy_assign(table);
    rec.greedy_assignment = greedy.assignment;
    rec.greedy_total = greedy.total;
    rec.greedy_total_shifted = shifted_total(greedy.assignment, shifted);
    if (policy != Policy::Greedy) {
      const AssignResult opt = optimal_assign(shifted);
      rec.optimal_assignment = opt.assignment;
      rec.optimal_total = assignment_total(opt.assignment, table);
      rec.optimal_total_shifted = opt.total;
    }
    rec.assignment = policy == Policy::Optimal ? *rec.optimal_assignment : rec.greedy_assignment;
    check_robot_conservation(rec.assignment, world.robots.size());

    for (std::size_t t = 0; t < world.targets.size(); ++t) {
      TargetRecord tr;
      tr.truth = world.targets[t].position;
      tr.estimate = {beliefs[t].mean.x(), beliefs[t].mean.y()};
      tr.error = norm(tr.truth - tr.estimate);
      tr.cov_trace = beliefs[t].trace();
      if (const auto it = rec.assignment.find(static_cast<int>(t)); it != rec.assignment.end()) {
        tr.unit = it->second;
      }
      rec.targets.push_back(tr);
    }

    // (3) control: one sweep per assigned robot, first action applied
    rec.robots.resize(world.robots.size());
    for (std::size_t r = 0; r < world.robots.size(); ++r) rec.robots[r].state = world.robots[r];
    for (const auto& [target, unit] : rec.assignment) {
      const auto ref = reference_trajectory(beliefs[static_cast<std::size_t>(target)],
                                            world.targets[static_cast<std::size_t>(target)],
                                            config.dt, control.horizon);
      std::vector<int> members{unit.first()};
      if (unit.is_pair()) members.push_back(unit.second());
      for (const int r : members) {
        RobotRecord& rr = rec.robots[static_cast<std::size_t>(r)];
        const ControlSolution sol = solve_pmp(rr.state, ref, config.dt, control);
        rr.target = target;
        rr.action = sol.actions.front();
        rr.residual = sol.stationarity_residual;
        rr.iterations = sol.iterations;
        rr.converged = sol.converged;
        rr.terminal_costate_zero = sol.costates.lambdas.back() == Costate{0.0, 0.0, 0.0};
      }
    }
    for (std::size_t r = 0; r < world.robots.size(); ++r) {
      world.robots[r] = step_robot(world.robots[r], rec.robots[r].action, config.dt);
    }

    // (4) targets move
    const std::vector<TargetState> models = world.targets;
    for (TargetState& t : world.targets) t = step_target(t, config.dt, noise, truth_sigma);

    // (5) sensing and (6) estimation
    for (std::size_t t = 0; t < world.targets.size(); ++t) {
      std::vector<Measurement> z;
      if (const auto it = rec.assignment.find(static_cast<int>(t)); it != rec.assignment.end()) {
        std::vector<int> members{it->second.first()};
        if (it->second.is_pair()) members.push_back(it->second.second());
        for (const int r : members) {
          const auto zr = measure(world.robots[static_cast<std::size_t>(r)], static_cast<std::size_t>(r),
                                  world.targets[t], t, noise, config);
          z.insert(z.end(), zr.begin(), zr.end());
        }
      }
      beliefs[t] = ekf_predict(beliefs[t], models[t], config.dt, process_cov);
      beliefs[t] = ekf_update(beliefs[t], z, world.robots, meas_noise);
    }
    world.step = k;
    world.clock = k * config.dt;

    // (7)
    result.steps.push_back(std::move(rec));
  }
  result.summary = summarize(result.steps);
  return result;
}

ComparisonResult compare_policies(const ScenarioConfig& config, std::span<const std::uint64_t> seeds) {
  const auto n_units = enumerate_units(config.n_sufficient, config.n_limited).size();
  if (config.n_targets > kOptimalMaxTargets || n_units > kOptimalMaxUnits) {
    throw InstanceTooLarge("scenario too large for the optimal comparison");
  }
  ComparisonResult out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = -std::numeric_limits<double>::infinity();
  for (const std::uint64_t seed : seeds) {
    ScenarioConfig c = config;
    c.seed = seed;
    const RunResult r = run(c, Policy::Both);
    for (const StepRecord& s : r.steps) {
      RatioRow row;
      row.seed = seed;
      row.n_targets = c.n_targets;
      row.step = s.step;
      row.greedy = s.greedy_total;
      row.optimal = *s.optimal_total;
      row.shift = s.quality_shift;
      row.greedy_shifted = s.greedy_total_shifted;
      row.optimal_shifted = *s.optimal_total_shifted;
      row.ratio = *s.ratio();
      out.min_ratio = std::min(out.min_ratio, row.ratio);
      out.max_ratio = std::max(out.max_ratio, row.ratio);
      if (row.ratio < 0.5 - kRatioTolerance || row.ratio > 1.0 + kRatioTolerance) ++out.violations;
      out.rows.push_back(row);
    }
  }
  if (out.rows.empty()) out.min_ratio = out.max_ratio = 1.0;
  return out;
}

}  // namespace hetsense
