#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "hetsense/assignment.hpp"
#include "hetsense/control.hpp"
#include "hetsense/estimation.hpp"
#include "hetsense/scenario.hpp"

namespace hetsense {

enum class Policy { Greedy, Optimal, Both };

/// RMSE checkpoints reported in summary.csv (those <= time_steps).
inline constexpr std::array<int, 8> kRmseCheckpoints{1, 10, 20, 30, 40, 50, 75, 100};

/// Allowed slack on the [1/2, 1] greedy/optimal ratio band.
inline constexpr double kRatioTolerance = 1e-9;

struct TargetRecord {
  Vec2 truth;
  Vec2 estimate;
  double error = 0.0;      // |truth - estimate|, m
  double cov_trace = 0.0;  // m^2
  std::optional<AssignableUnit> unit;
};

struct RobotRecord {
  RobotState state;
  RobotAction action;
  std::optional<int> target;
  // Controller diagnostics; meaningful only when `target` is set.
  double residual = 0.0;
  int iterations = 0;
  bool converged = true;
  bool terminal_costate_zero = true;
};

/// Snapshot at the start of step k (time (k-1) dt): truth and belief before
/// that step's measurements, plus the decisions taken from that state.
struct StepRecord {
  int step = 0;
  std::vector<TargetRecord> targets;
  std::vector<RobotRecord> robots;
  /// Assignment that drove the robots this step.
  Assignment assignment;
  Assignment greedy_assignment;
  std::optional<Assignment> optimal_assignment;
  /// Raw log-det totals of the greedy / optimal picks.
  double greedy_total = 0.0;
  std::optional<double> optimal_total;
  /// Totals on the table shifted by its minimum finite entry.
  double quality_shift = 0.0;
  double greedy_total_shifted = 0.0;
  std::optional<double> optimal_total_shifted;

  /// greedy_shifted / optimal_shifted (1 when both are zero); needs the optimum.
  std::optional<double> ratio() const;
};

struct ControlStats {
  std::size_t solves = 0;
  std::size_t converged = 0;
  double max_residual_converged = 0.0;
  double max_residual = 0.0;
  bool all_terminal_costates_zero = true;
};

struct RunSummary {
  std::vector<int> checkpoints;
  /// rmse[target][i] at checkpoints[i], cumulative over steps 1..k.
  std::vector<std::vector<double>> rmse;
  /// Ratio at the final step, when the optimum was computed.
  std::optional<double> final_ratio;
  ControlStats control;
};

struct RunResult {
  std::vector<StepRecord> steps;
  RunSummary summary;
};

/// Quality of every (unit, target) pair from current robot poses, with each
/// target placed at its belief mean and its known circular-motion model.
QualityTable build_quality_table(std::span<const RobotState> robots,
                                 std::span<const TargetState> target_models,
                                 std::span<const EkfBelief> beliefs, const ScenarioConfig& config);

/// Cumulative RMSE of per-step errors up to `step` (1-based).
double cumulative_rmse(std::span<const double> errors, int step);

RunSummary summarize(std::span<const StepRecord> steps);

/// Closed loop: assign, control, move, sense, estimate, once per step.
/// Greedy and Both are driven by the greedy assignment (Both additionally
/// records the optimum); Optimal is driven by the optimum of the shifted table.
RunResult run(const ScenarioConfig& config, Policy policy);

struct RatioRow {
  std::uint64_t seed = 0;
  int n_targets = 0;
  int step = 0;
  double greedy = 0.0;
  double optimal = 0.0;
  double shift = 0.0;
  double greedy_shifted = 0.0;
  double optimal_shifted = 0.0;
  double ratio = 1.0;
};

struct ComparisonResult {
  std::vector<RatioRow> rows;
  double min_ratio = 1.0;
  double max_ratio = 1.0;
  std::size_t violations = 0;  // rows outside [1/2, 1] beyond kRatioTolerance
};

/// Runs the greedy-driven loop for each seed and records greedy / optimal
/// shifted-quality ratios at every step. Throws InstanceTooLarge up front.
ComparisonResult compare_policies(const ScenarioConfig& config, std::span<const std::uint64_t> seeds);

// CSV outputs; floating-point fields use 6 significant digits.
void write_steps_csv(const std::filesystem::path& path, std::span<const StepRecord> steps);
void write_assignments_csv(const std::filesystem::path& path, std::span<const StepRecord> steps);
void write_robots_csv(const std::filesystem::path& path, std::span<const StepRecord> steps);
void write_summary_csv(const std::filesystem::path& path, const RunSummary& summary);
void write_ratios_csv(const std::filesystem::path& path, std::span<const RatioRow> rows);

}  // namespace hetsense
